#include "sphereclamp/controller.hpp"

#include <stdexcept>
#include <string>

namespace sphereclamp {

std::string_view to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::kTracking: return "tracking";
    case ControlMode::kRecovering: return "recovering";
    case ControlMode::kWaiting: return "waiting";
  }
  return "unknown";
}

std::string_view to_string(RecoveryStrategy strategy) {
  switch (strategy) {
    case RecoveryStrategy::kReturnToLastValid: return "return_to_last_valid";
    case RecoveryStrategy::kNearestSample: return "nearest_sample";
    case RecoveryStrategy::kRestartToF: return "restart_to_f";
  }
  return "unknown";
}

void PathSpec::validate() const {
  if (waypoints.size() < 2) {
    throw std::invalid_argument("PathSpec: needs at least 2 waypoints");
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (!waypoints[i].same_layout(waypoints[0])) {
      throw std::invalid_argument("PathSpec: waypoint " + std::to_string(i) +
                                  " has a different limb layout");
    }
  }
  if (loop) {
    bool any_motion = false;
    for (int i = 0; i < segment_count(); ++i) any_motion = any_motion || !is_degenerate(i);
    if (!any_motion) throw std::invalid_argument("PathSpec: looping path has no motion");
  }
}

int PathSpec::segment_count() const {
  const int n = static_cast<int>(waypoints.size());
  return loop ? n : n - 1;
}

Segment PathSpec::segment(int index) const {
  const int n = static_cast<int>(waypoints.size());
  if (index < 0 || index >= segment_count()) {
    throw std::out_of_range("PathSpec: segment index " + std::to_string(index));
  }
  return Segment{waypoints[static_cast<std::size_t>(index)],
                 waypoints[static_cast<std::size_t>((index + 1) % n)]};
}

bool PathSpec::is_degenerate(int index) const {
  const int n = static_cast<int>(waypoints.size());
  return waypoints[static_cast<std::size_t>(index)] ==
         waypoints[static_cast<std::size_t>((index + 1) % n)];
}

namespace {

struct SegmentClamp {
  ClampOutcome<MultiPose> outcome;
  int samples;
};

SegmentClamp clamp_segment(const MultiPose& sensed, const Segment& seg,
                           const MultiMetricParams& metric, const ClampConfig& cfg) {
  const auto d = [&metric](const MultiPose& a, const MultiPose& b) {
    return stacked_distance(a, b, metric);
  };
  const int samples = sample_count(seg.start, seg.finish, d, cfg);
  return {hypersphere_clamp(sensed, seg.start, seg.finish, StackedInterp{}, d, samples, cfg.scan),
          samples};
}

// Closest grid sample with t >= t_floor; used when the unconstrained solution
// would move backwards.
ClampNoSolution<MultiPose> nearest_at_or_above(const MultiPose& sensed, const Segment& seg,
                                               int samples, double t_floor,
                                               const MultiMetricParams& metric) {
  int best = 0;
  double best_dist = stacked_distance(seg.finish, sensed, metric);
  for (int i = 1; i < samples && grid_t(i, samples) >= t_floor; ++i) {
    const double d =
        stacked_distance(stacked_interp(grid_t(i, samples), seg.start, seg.finish), sensed, metric);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  const double t = grid_t(best, samples);
  return {stacked_interp(t, seg.start, seg.finish), t, best_dist};
}

void skip_degenerate(ControllerState& state, const PathSpec& path) {
  if (state.segment_override) return;
  while (!state.finished && path.is_degenerate(state.segment_index)) {
    if (!path.loop && state.segment_index == path.segment_count() - 1) {
      state.finished = true;
      state.t = 1.0;
      state.t_floor = 1.0;
      return;
    }
    ++state.segment_index;
    if (state.segment_index == path.segment_count()) {
      state.segment_index = 0;
      ++state.laps;
    }
  }
}

void advance_segment(ControllerState& state, const PathSpec& path) {
  state.segment_override.reset();
  if (!path.loop && state.segment_index == path.segment_count() - 1) {
    state.finished = true;
    state.t = 1.0;
    state.t_floor = 1.0;
    return;
  }
  ++state.segment_index;
  if (state.segment_index == path.segment_count()) {
    state.segment_index = 0;
    ++state.laps;
  }
  state.t = 0.0;
  state.t_floor = 0.0;
  skip_degenerate(state, path);
}

void check_sensed(const MultiPose& sensed, const MultiPose& reference,
                  const MultiMetricParams& metric) {
  if (!sensed.same_layout(reference)) {
    throw std::invalid_argument("controller: sensed state limb layout does not match the path");
  }
  if (metric.per_ee.size() != sensed.size()) {
    throw std::invalid_argument("controller: metric has " + std::to_string(metric.per_ee.size()) +
                                " entries for " + std::to_string(sensed.size()) +
                                " end-effectors");
  }
}

StepResult step_recovery(const ControllerState& state, const MultiPose& sensed,
                         const MultiMetricParams& metric, const ClampConfig& cfg) {
  ControllerState next = state;
  auto clamp = clamp_segment(sensed, *next.recovery_path, metric, cfg);
  auto* sol = std::get_if<ClampSolution<MultiPose>>(&clamp.outcome);
  if (sol == nullptr || (cfg.enforce_monotonic_t && sol->t < next.recovery_t_floor)) {
    // Disturbed again while recovering: replan from where the system is now.
    next.recovery_path = Segment{sensed, next.last_valid_point};
    next.recovery_t_floor = 0.0;
    ++next.recovery_replans;
    clamp = clamp_segment(sensed, *next.recovery_path, metric, cfg);
    sol = std::get_if<ClampSolution<MultiPose>>(&clamp.outcome);
    if (sol == nullptr) {
      throw std::runtime_error("controller: recovery trajectory has no point within the ball");
    }
  }
  next.mode = ControlMode::kRecovering;
  next.last_command = sol->point;
  if (cfg.enforce_monotonic_t) next.recovery_t_floor = sol->t;
  if (sol->t == 1.0) {
    next.mode = ControlMode::kTracking;
    next.recovery_path.reset();
    next.recovery_t_floor = 0.0;
  }
  MultiPose command = next.last_command;
  return {std::move(next), std::move(command)};
}

}  // namespace

ControllerState ControllerState::start_of(const PathSpec& path) {
  path.validate();
  ControllerState state(path.waypoints.front());
  skip_degenerate(state, path);
  return state;
}

ControllerState ControllerState::holding(const MultiPose& pose) { return ControllerState(pose); }

Segment active_segment(const ControllerState& state, const PathSpec& path) {
  if (state.segment_override) return *state.segment_override;
  return path.segment(state.segment_index);
}

StepResult step_tracking(const ControllerState& state, const MultiPose& sensed,
                         const PathSpec& path, const MultiMetricParams& metric,
                         const ClampConfig& cfg, RecoveryStrategy strategy) {
  if (path.waypoints.empty()) throw std::invalid_argument("step_tracking: empty path");
  check_sensed(sensed, path.waypoints.front(), metric);

  if (state.mode == ControlMode::kRecovering && state.recovery_path) {
    return step_recovery(state, sensed, metric, cfg);
  }

  ControllerState next = state;
  next.mode = ControlMode::kTracking;
  const Segment seg = active_segment(state, path);
  auto clamp = clamp_segment(sensed, seg, metric, cfg);

  if (const auto* sol = std::get_if<ClampSolution<MultiPose>>(&clamp.outcome);
      sol != nullptr && (!cfg.enforce_monotonic_t || sol->t >= state.t_floor)) {
    next.t = sol->t;
    if (cfg.enforce_monotonic_t) next.t_floor = sol->t;
    next.last_command = sol->point;
    next.last_valid_point = sol->point;
    if (sol->t == 1.0 && !next.finished) advance_segment(next, path);
    MultiPose command = next.last_command;
    return {std::move(next), std::move(command)};
  }

  // Either nothing is in the ball, or only samples behind the monotonic floor
  // are; both count as no solution.
  const ClampNoSolution<MultiPose> missing =
      has_solution(clamp.outcome)
          ? nearest_at_or_above(sensed, seg, clamp.samples, state.t_floor, metric)
          : std::get<ClampNoSolution<MultiPose>>(clamp.outcome);
  ++next.no_solution_events;
  return handle_no_solution(next, sensed, missing, seg, strategy, metric, cfg);
}

StepResult handle_no_solution(const ControllerState& state, const MultiPose& sensed,
                              const ClampNoSolution<MultiPose>& outcome, const Segment& segment,
                              RecoveryStrategy strategy, const MultiMetricParams& metric,
                              const ClampConfig& cfg) {
  ControllerState next = state;
  switch (strategy) {
    case RecoveryStrategy::kReturnToLastValid: {
      next.recovery_path = Segment{sensed, next.last_valid_point};
      next.recovery_t_floor = 0.0;
      next.mode = ControlMode::kRecovering;
      ++next.recovery_count;
      return step_recovery(next, sensed, metric, cfg);
    }
    case RecoveryStrategy::kNearestSample: {
      next.mode = ControlMode::kTracking;
      next.t = outcome.nearest_t;
      if (cfg.enforce_monotonic_t && outcome.nearest_t > next.t_floor) {
        next.t_floor = outcome.nearest_t;
      }
      next.last_command = outcome.nearest_point;
      return {std::move(next), outcome.nearest_point};
    }
    case RecoveryStrategy::kRestartToF: {
      const Segment restart{sensed, segment.finish};
      next.segment_override = restart;
      next.mode = ControlMode::kTracking;
      ++next.recovery_count;
      auto clamp = clamp_segment(sensed, restart, metric, cfg);
      const auto& sol = std::get<ClampSolution<MultiPose>>(clamp.outcome);
      next.t = sol.t;
      next.t_floor = cfg.enforce_monotonic_t ? sol.t : 0.0;
      next.last_command = sol.point;
      next.last_valid_point = sol.point;
      return {std::move(next), sol.point};
    }
  }
  throw std::invalid_argument("handle_no_solution: unknown strategy");
}

StepResult step_speed(const ControllerState& state, const MultiPose& sensed,
                      const SpeedInput& speed, double dt, const MultiMetricParams& metric,
                      const ClampConfig& cfg) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_speed: dt must be > 0");
  check_sensed(sensed, state.last_command, metric);

  const MultiPose& start = state.last_command;
  std::vector<Pose> shifted = start.poses();
  const Eigen::Vector3d offset = speed.linear_velocity * dt;
  for (auto& p : shifted) p.v += offset;
  const Segment micro{start, start.with_poses(std::move(shifted))};

  ControllerState next = state;
  auto clamp = clamp_segment(sensed, micro, metric, cfg);
  if (const auto* sol = std::get_if<ClampSolution<MultiPose>>(&clamp.outcome)) {
    next.mode = ControlMode::kTracking;
    next.t = sol->t;
    next.last_command = sol->point;
    next.last_valid_point = sol->point;
    return {std::move(next), sol->point};
  }
  next.mode = ControlMode::kWaiting;
  ++next.no_solution_events;
  return {std::move(next), state.last_command};
}

}  // namespace sphereclamp
