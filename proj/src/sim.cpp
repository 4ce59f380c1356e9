#include "sphereclamp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace sphereclamp::sim {

std::string_view to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kBlock: return "block";
    case DisturbanceKind::kSlowdown: return "slowdown";
    case DisturbanceKind::kFreeze: return "freeze";
    case DisturbanceKind::kDisplace: return "displace";
    case DisturbanceKind::kPowerCycle: return "power_cycle";
  }
  return "unknown";
}

std::optional<DisturbanceKind> disturbance_kind_from_string(std::string_view name) {
  for (auto k : {DisturbanceKind::kBlock, DisturbanceKind::kSlowdown, DisturbanceKind::kFreeze,
                 DisturbanceKind::kDisplace, DisturbanceKind::kPowerCycle}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Eigen::Vector3d SpeedProgram::velocity_at(double elapsed) const {
  double acc = 0.0;
  for (const auto& phase : phases) {
    if (elapsed < acc + phase.duration) return phase.velocity;
    acc += phase.duration;
  }
  return Eigen::Vector3d::Zero();
}

const MultiPose& Scenario::initial_pose() const {
  if (const auto* p = std::get_if<PathProgram>(&program)) {
    if (p->path.waypoints.empty()) throw ValidationError({"program.path.waypoints: empty"});
    return p->path.waypoints.front();
  }
  return std::get<SpeedProgram>(program).initial;
}

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& issue : issues) os << "\n  " << issue;
  return os.str();
}

bool is_freezing(DisturbanceKind k) {
  return k == DisturbanceKind::kFreeze || k == DisturbanceKind::kPowerCycle;
}

bool has_offset(DisturbanceKind k) {
  return k == DisturbanceKind::kDisplace || k == DisturbanceKind::kPowerCycle;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

void validate(const Scenario& s) {
  std::vector<std::string> issues;
  const auto add = [&issues](const std::string& path, const std::string& msg) {
    issues.push_back(path + ": " + msg);
  };

  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) add("dt", "must be finite and > 0");
  if (!(s.horizon >= s.dt) || !std::isfinite(s.horizon)) add("horizon", "must be finite and >= dt");
  if (!std::isfinite(s.start_time)) add("start_time", "must be finite");
  if (!(s.disturbance_jitter >= 0.0)) add("disturbance_jitter", "must be >= 0");

  std::set<std::string> names;
  if (s.limbs.empty()) add("limbs", "at least one limb is required");
  for (std::size_t i = 0; i < s.limbs.size(); ++i) {
    const auto& limb = s.limbs[i];
    const std::string at = "limbs[" + std::to_string(i) + "]";
    if (limb.name.empty()) add(at + ".name", "must not be empty");
    if (limb.name == kAllLimbs) add(at + ".name", "'ALL' is reserved");
    if (!names.insert(limb.name).second) add(at + ".name", "duplicate limb '" + limb.name + "'");
    if (!(limb.max_ee_speed > 0.0)) add(at + ".max_ee_speed", "must be > 0");
    if (!(limb.tracking_gain > 0.0)) add(at + ".tracking_gain", "must be > 0");
    if (!(limb.sensor_period >= 0.0)) add(at + ".sensor_period", "must be >= 0");
    if (!(limb.command_latency >= 0.0)) add(at + ".command_latency", "must be >= 0");
    if (!(limb.workspace.lo.array() <= limb.workspace.hi.array()).all()) {
      add(at + ".workspace", "lo must be <= hi on every axis");
    }
  }

  std::optional<MultiPose> initial;
  if (const auto* p = std::get_if<PathProgram>(&s.program)) {
    try {
      p->path.validate();
      initial = p->path.waypoints.front();
    } catch (const std::exception& e) {
      add("program.path", e.what());
    }
  } else {
    const auto& speed = std::get<SpeedProgram>(s.program);
    initial = speed.initial;
    for (std::size_t i = 0; i < speed.phases.size(); ++i) {
      const std::string at = "program.phases[" + std::to_string(i) + "]";
      if (!(speed.phases[i].duration >= 0.0)) add(at + ".duration", "must be >= 0");
      if (!speed.phases[i].velocity.allFinite()) add(at + ".velocity", "must be finite");
    }
  }
  if (initial) {
    if (initial->size() != s.limbs.size()) {
      add("program", "poses for " + std::to_string(initial->size()) + " limbs, scenario has " +
                         std::to_string(s.limbs.size()));
    } else {
      for (std::size_t i = 0; i < s.limbs.size(); ++i) {
        if (initial->id(i) != s.limbs[i].name) {
          add("program.limbs[" + std::to_string(i) + "]",
              "expected limb '" + s.limbs[i].name + "', got '" + initial->id(i) + "'");
        } else if (!s.limbs[i].workspace.contains(initial->pose(i).v)) {
          add("limbs[" + std::to_string(i) + "].workspace", "initial pose is outside the workspace");
        }
      }
    }
  }

  if (s.metric.per_ee.size() != s.limbs.size()) {
    add("metric.per_ee", "has " + std::to_string(s.metric.per_ee.size()) + " entries for " +
                             std::to_string(s.limbs.size()) + " limbs");
  }
  for (std::size_t i = 0; i < s.metric.per_ee.size(); ++i) {
    try {
      s.metric.per_ee[i].validate();
    } catch (const std::exception& e) {
      add("metric.per_ee[" + std::to_string(i) + "]", e.what());
    }
  }
  if (!(s.metric.norm_order >= 1.0)) add("metric.norm_order", "must be >= 1 or inf");
  try {
    s.clamp.validate();
  } catch (const std::exception& e) {
    add("clamp", e.what());
  }

  const double end_time = s.start_time + s.horizon;
  for (std::size_t i = 0; i < s.disturbances.size(); ++i) {
    const auto& d = s.disturbances[i];
    const std::string at = "disturbances[" + std::to_string(i) + "]";
    if (d.target != kAllLimbs && names.count(d.target) == 0) {
      add(at + ".target", "unknown limb '" + d.target + "'");
    }
    if (!(d.duration >= 0.0)) add(at + ".duration", "must be >= 0");
    if (!(d.start >= s.start_time) || !(d.end() <= end_time)) {
      add(at, "interval must lie within the scenario horizon");
    }
    if (d.kind == DisturbanceKind::kSlowdown && !(d.factor > 0.0 && d.factor < 1.0)) {
      add(at + ".factor", "must be in (0, 1)");
    }
    if (!d.offset.allFinite()) add(at + ".offset", "must be finite");
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::vector<Disturbance> active_disturbances(const std::vector<Disturbance>& all,
                                             const std::string& limb, double time) {
  std::vector<Disturbance> out;
  for (const auto& d : all) {
    if (d.hits(limb) && d.active_at(time)) out.push_back(d);
  }
  return out;
}

Pose limb_step(const LimbModel& limb, const Pose& sensed, const Pose& command,
               const std::vector<Disturbance>& active, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("limb_step: dt must be > 0");
  double factor = 1.0;
  for (const auto& d : active) {
    switch (d.kind) {
      case DisturbanceKind::kBlock:
      case DisturbanceKind::kFreeze:
      case DisturbanceKind::kPowerCycle:
        return sensed;
      case DisturbanceKind::kSlowdown:
        factor *= d.factor;
        break;
      case DisturbanceKind::kDisplace:
        break;
    }
  }

  const double alpha = std::min(1.0, limb.tracking_gain * dt);
  Eigen::Vector3d step = alpha * (command.v - sensed.v);
  const double cap = limb.max_ee_speed * factor * dt;
  const double len = step.norm();
  if (len > cap) step *= cap / len;

  Pose out;
  out.v = limb.workspace.clip(sensed.v + step);
  out.rotation = slerp(sensed.rotation, command.rotation, alpha);
  return out;
}

namespace {

// Disturbance window in whole steps: active for start_step <= k < end_step.
struct StepWindow {
  Disturbance d;
  long long start_step;
  long long end_step;
};

long long to_step(double time, double start_time, double dt) {
  return static_cast<long long>(std::ceil((time - start_time) / dt - 1e-9));
}

}  // namespace

Trace run_scenario(const Scenario& s) {
  validate(s);
  const MultiPose& initial = s.initial_pose();
  const std::size_t n = s.limbs.size();
  const auto steps = static_cast<long long>(std::llround(s.horizon / s.dt));

  std::vector<Disturbance> schedule = s.disturbances;
  if (s.disturbance_jitter > 0.0) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> jitter(-s.disturbance_jitter, s.disturbance_jitter);
    const double latest = s.start_time + s.horizon;
    for (auto& d : schedule) {
      d.start = std::clamp(d.start + jitter(rng), s.start_time, std::max(s.start_time, latest - d.duration));
    }
  }

  std::vector<std::vector<StepWindow>> windows(n);
  for (const auto& d : schedule) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d.hits(s.limbs[i].name)) {
        windows[i].push_back({d, to_step(d.start, s.start_time, s.dt),
                              to_step(d.end(), s.start_time, s.dt)});
      }
    }
  }

  std::vector<long long> sensor_every(n);
  std::vector<long long> latency_steps(n);
  for (std::size_t i = 0; i < n; ++i) {
    sensor_every[i] = std::max<long long>(1, std::llround(s.limbs[i].sensor_period / s.dt));
    latency_steps[i] = std::llround(s.limbs[i].command_latency / s.dt);
  }

  std::vector<Pose> plant = initial.poses();
  std::vector<Pose> reading = initial.poses();
  std::vector<bool> was_frozen(n, false);

  const auto* path_program = std::get_if<PathProgram>(&s.program);
  const auto* speed_program = std::get_if<SpeedProgram>(&s.program);
  ControllerState state = path_program ? ControllerState::start_of(path_program->path)
                                       : ControllerState::holding(initial);

  Trace trace;
  trace.limb_names = initial.ids();
  trace.records.reserve(static_cast<std::size_t>(steps));

  for (long long k = 0; k < steps; ++k) {
    const double time = s.start_time + static_cast<double>(k) * s.dt;

    std::vector<std::vector<Disturbance>> active(n);
    std::vector<bool> frozen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& w : windows[i]) {
        if (k == w.end_step && has_offset(w.d.kind)) {
          plant[i].v = s.limbs[i].workspace.clip(plant[i].v + w.d.offset);
        }
        if (k >= w.start_step && k < w.end_step) {
          active[i].push_back(w.d);
          frozen[i] = frozen[i] || is_freezing(w.d.kind);
        }
      }
      // A freeze snapshots the plant as it goes down; the reading then holds.
      const bool freeze_edge = frozen[i] != was_frozen[i];
      if (freeze_edge || (!frozen[i] && k % sensor_every[i] == 0)) reading[i] = plant[i];
      was_frozen[i] = frozen[i];
    }

    const MultiPose sensed = initial.with_poses(reading);
    StepResult result =
        path_program
            ? step_tracking(state, sensed, path_program->path, s.metric, s.clamp, s.strategy)
            : step_speed(state, sensed,
                         SpeedInput{speed_program->velocity_at(static_cast<double>(k) * s.dt)},
                         s.dt, s.metric, s.clamp);
    state = std::move(result.state);

    TraceRecord rec;
    rec.time = time;
    rec.sensed = reading;
    rec.command = result.command.poses();
    rec.dist.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rec.dist[i] = se3_distance(rec.command[i], rec.sensed[i], s.metric.per_ee[i]);
    }
    if (k_norm(rec.dist, s.metric.norm_order) > 1.0 + kSafetyTolerance) ++trace.safety_violations;
    rec.t = state.t;
    rec.segment = state.segment_index;
    rec.mode = state.mode;
    trace.records.push_back(std::move(rec));

    for (std::size_t i = 0; i < n; ++i) {
      const long long src = k - latency_steps[i];
      const Pose& cmd = src >= 0 ? trace.records[static_cast<std::size_t>(src)].command[i]
                                 : initial.pose(i);
      plant[i] = limb_step(s.limbs[i], plant[i], cmd, active[i], s.dt);
    }
  }

  trace.no_solution_events = state.no_solution_events;
  trace.recovery_count = state.recovery_count;
  trace.laps = state.laps;
  return trace;
}

}  // namespace sphereclamp::sim
