#include "sphereclamp/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace sphereclamp::io {
namespace {

using nlohmann::json;
using sim::ValidationError;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError({path + ": " + msg});
}

json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json pose_to_json(const Pose& p) {
  const auto& q = p.rotation;
  return {{"v", vec_to_json(p.v)}, {"q", json::array({q.w(), q.x(), q.y(), q.z()})}};
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

double read_real(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(path, "expected a number or \"inf\"");
}

double real_or(const json& j, const char* key, const std::string& path, double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : read_real(*it, path + "." + key);
}

Eigen::Vector3d read_vec(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 numbers");
  return {read_real(j[0], path + "[0]"), read_real(j[1], path + "[1]"),
          read_real(j[2], path + "[2]")};
}

Pose read_pose(const json& j, const std::string& path) {
  const Eigen::Vector3d v = read_vec(member(j, "v", path), path + ".v");
  const json& q = member(j, "q", path);
  if (!q.is_array() || q.size() != 4) fail(path + ".q", "expected [w, x, y, z]");
  try {
    return Pose(v, Rotation(read_real(q[0], path + ".q[0]"), read_real(q[1], path + ".q[1]"),
                            read_real(q[2], path + ".q[2]"), read_real(q[3], path + ".q[3]")));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

MultiPose read_multipose(const json& j, const std::vector<std::string>& names,
                         const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of poses in limb order");
  if (j.size() != names.size()) {
    fail(path, "expected " + std::to_string(names.size()) + " poses, got " +
                   std::to_string(j.size()));
  }
  std::vector<Pose> poses;
  for (std::size_t i = 0; i < j.size(); ++i) {
    poses.push_back(read_pose(j[i], path + "[" + std::to_string(i) + "]"));
  }
  try {
    return MultiPose(names, std::move(poses));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

json multipose_to_json(const MultiPose& m) {
  json arr = json::array();
  for (const auto& p : m.poses()) arr.push_back(pose_to_json(p));
  return arr;
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

ScanPolicy read_scan(const json& j, const std::string& path) {
  const auto s = read_string(j, path);
  if (s == "serial") return ScanPolicy::kSerial;
  if (s == "parallel") return ScanPolicy::kParallel;
  fail(path, "expected \"serial\" or \"parallel\"");
}

RecoveryStrategy read_strategy(const json& j, const std::string& path) {
  const auto s = read_string(j, path);
  for (auto k : {RecoveryStrategy::kReturnToLastValid, RecoveryStrategy::kNearestSample,
                 RecoveryStrategy::kRestartToF}) {
    if (to_string(k) == s) return k;
  }
  fail(path, "unknown recovery strategy '" + s + "'");
}

}  // namespace

json scenario_to_json(const sim::Scenario& s) {
  json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["dt"] = s.dt;
  j["start_time"] = s.start_time;
  j["horizon"] = s.horizon;
  j["seed"] = s.seed;
  j["disturbance_jitter"] = s.disturbance_jitter;
  j["strategy"] = std::string(to_string(s.strategy));
  j["clamp"] = {{"step_distance", s.clamp.step_distance},
                {"min_samples", s.clamp.min_samples},
                {"max_samples", s.clamp.max_samples},
                {"enforce_monotonic_t", s.clamp.enforce_monotonic_t},
                {"scan", s.clamp.scan == ScanPolicy::kParallel ? "parallel" : "serial"}};

  json per_ee = json::array();
  for (const auto& p : s.metric.per_ee) {
    per_ee.push_back({{"p_e", real_to_json(p.p_e)}, {"r_e", real_to_json(p.r_e)}});
  }
  j["metric"] = {{"norm_order", real_to_json(s.metric.norm_order)}, {"per_ee", per_ee}};

  json limbs = json::array();
  for (const auto& l : s.limbs) {
    limbs.push_back({{"name", l.name},
                     {"max_ee_speed", l.max_ee_speed},
                     {"tracking_gain", l.tracking_gain},
                     {"sensor_period", l.sensor_period},
                     {"command_latency", l.command_latency},
                     {"workspace", {{"lo", vec_to_json(l.workspace.lo)},
                                    {"hi", vec_to_json(l.workspace.hi)}}}});
  }
  j["limbs"] = limbs;

  if (const auto* p = std::get_if<sim::PathProgram>(&s.program)) {
    json wps = json::array();
    for (const auto& w : p->path.waypoints) wps.push_back(multipose_to_json(w));
    j["program"] = {{"type", "path"}, {"loop", p->path.loop}, {"waypoints", wps}};
  } else {
    const auto& sp = std::get<sim::SpeedProgram>(s.program);
    json phases = json::array();
    for (const auto& ph : sp.phases) {
      phases.push_back({{"duration", ph.duration}, {"velocity", vec_to_json(ph.velocity)}});
    }
    j["program"] = {{"type", "speed"}, {"initial", multipose_to_json(sp.initial)},
                    {"phases", phases}};
  }

  json dist = json::array();
  for (const auto& d : s.disturbances) {
    dist.push_back({{"kind", std::string(sim::to_string(d.kind))},
                    {"target", d.target},
                    {"start", d.start},
                    {"duration", d.duration},
                    {"factor", d.factor},
                    {"offset", vec_to_json(d.offset)}});
  }
  j["disturbances"] = dist;
  return j;
}

sim::Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) fail("$", "scenario must be a JSON object");
  sim::Scenario s;
  if (j.contains("name")) s.name = read_string(j["name"], "name");
  if (j.contains("description")) s.description = read_string(j["description"], "description");
  s.dt = read_real(member(j, "dt", "$"), "dt");
  s.start_time = real_or(j, "start_time", "$", 0.0);
  s.horizon = read_real(member(j, "horizon", "$"), "horizon");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.disturbance_jitter = real_or(j, "disturbance_jitter", "$", 0.0);
  if (j.contains("strategy")) s.strategy = read_strategy(j["strategy"], "strategy");

  if (j.contains("clamp")) {
    const json& c = j["clamp"];
    if (!c.is_object()) fail("clamp", "expected an object");
    s.clamp.step_distance = real_or(c, "step_distance", "clamp", s.clamp.step_distance);
    if (c.contains("min_samples")) {
      if (!c["min_samples"].is_number_integer()) fail("clamp.min_samples", "expected an integer");
      s.clamp.min_samples = c["min_samples"].get<int>();
    }
    if (c.contains("max_samples")) {
      if (!c["max_samples"].is_number_integer()) fail("clamp.max_samples", "expected an integer");
      s.clamp.max_samples = c["max_samples"].get<int>();
    }
    if (c.contains("enforce_monotonic_t")) {
      if (!c["enforce_monotonic_t"].is_boolean()) {
        fail("clamp.enforce_monotonic_t", "expected a boolean");
      }
      s.clamp.enforce_monotonic_t = c["enforce_monotonic_t"].get<bool>();
    }
    if (c.contains("scan")) s.clamp.scan = read_scan(c["scan"], "clamp.scan");
  }

  const json& limbs = member(j, "limbs", "$");
  if (!limbs.is_array()) fail("limbs", "expected an array");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    const std::string at = "limbs[" + std::to_string(i) + "]";
    const json& l = limbs[i];
    sim::LimbModel m;
    m.name = read_string(member(l, "name", at), at + ".name");
    m.max_ee_speed = read_real(member(l, "max_ee_speed", at), at + ".max_ee_speed");
    m.tracking_gain = read_real(member(l, "tracking_gain", at), at + ".tracking_gain");
    m.sensor_period = real_or(l, "sensor_period", at, 0.0);
    m.command_latency = real_or(l, "command_latency", at, 0.0);
    if (l.contains("workspace")) {
      const json& w = l["workspace"];
      m.workspace.lo = read_vec(member(w, "lo", at + ".workspace"), at + ".workspace.lo");
      m.workspace.hi = read_vec(member(w, "hi", at + ".workspace"), at + ".workspace.hi");
    }
    names.push_back(m.name);
    s.limbs.push_back(std::move(m));
  }

  const json& metric = member(j, "metric", "$");
  s.metric.norm_order = real_or(metric, "norm_order", "metric", kInf);
  const json& per_ee = member(metric, "per_ee", "metric");
  if (!per_ee.is_array()) fail("metric.per_ee", "expected an array");
  for (std::size_t i = 0; i < per_ee.size(); ++i) {
    const std::string at = "metric.per_ee[" + std::to_string(i) + "]";
    s.metric.per_ee.push_back(Se3MetricParams{read_real(member(per_ee[i], "p_e", at), at + ".p_e"),
                                              real_or(per_ee[i], "r_e", at, kInf)});
  }

  const json& program = member(j, "program", "$");
  const std::string type = read_string(member(program, "type", "program"), "program.type");
  if (type == "path") {
    sim::PathProgram p;
    if (program.contains("loop")) {
      if (!program["loop"].is_boolean()) fail("program.loop", "expected a boolean");
      p.path.loop = program["loop"].get<bool>();
    }
    const json& wps = member(program, "waypoints", "program");
    if (!wps.is_array()) fail("program.waypoints", "expected an array");
    for (std::size_t i = 0; i < wps.size(); ++i) {
      p.path.waypoints.push_back(
          read_multipose(wps[i], names, "program.waypoints[" + std::to_string(i) + "]"));
    }
    s.program = std::move(p);
  } else if (type == "speed") {
    sim::SpeedProgram p{read_multipose(member(program, "initial", "program"), names,
                                       "program.initial"),
                        {}};
    const json& phases = member(program, "phases", "program");
    if (!phases.is_array()) fail("program.phases", "expected an array");
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const std::string at = "program.phases[" + std::to_string(i) + "]";
      p.phases.push_back({read_real(member(phases[i], "duration", at), at + ".duration"),
                          read_vec(member(phases[i], "velocity", at), at + ".velocity")});
    }
    s.program = std::move(p);
  } else {
    fail("program.type", "expected \"path\" or \"speed\"");
  }

  if (j.contains("disturbances")) {
    const json& ds = j["disturbances"];
    if (!ds.is_array()) fail("disturbances", "expected an array");
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string at = "disturbances[" + std::to_string(i) + "]";
      sim::Disturbance d;
      const auto kind_name = read_string(member(ds[i], "kind", at), at + ".kind");
      const auto kind = sim::disturbance_kind_from_string(kind_name);
      if (!kind) fail(at + ".kind", "unknown disturbance kind '" + kind_name + "'");
      d.kind = *kind;
      d.target = read_string(member(ds[i], "target", at), at + ".target");
      d.start = read_real(member(ds[i], "start", at), at + ".start");
      d.duration = read_real(member(ds[i], "duration", at), at + ".duration");
      d.factor = real_or(ds[i], "factor", at, 1.0);
      if (ds[i].contains("offset")) d.offset = read_vec(ds[i]["offset"], at + ".offset");
      s.disturbances.push_back(std::move(d));
    }
  }

  sim::validate(s);
  return s;
}

sim::Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path.string(), "cannot open scenario file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(path.string(), std::string("JSON parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario_file(const sim::Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scenario_to_json(scenario).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void apply_override(sim::Scenario& s, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail("--set", "expected key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);

  double scale = 1.0;
  if (key == "r_e" && value.size() > 3 && value.ends_with("deg")) {
    value.resize(value.size() - 3);
    scale = std::numbers::pi / 180.0;
  }
  double number = 0.0;
  if (value == "inf") {
    number = kInf;
  } else {
    std::size_t used = 0;
    try {
      number = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) fail("--set " + key, "not a number: '" + value + "'");
  }
  number *= scale;

  if (key == "dt") {
    s.dt = number;
  } else if (key == "horizon") {
    s.horizon = number;
  } else if (key == "step_distance") {
    s.clamp.step_distance = number;
  } else if (key == "p_e") {
    for (auto& p : s.metric.per_ee) p.p_e = number;
  } else if (key == "r_e") {
    for (auto& p : s.metric.per_ee) p.r_e = number;
  } else {
    fail("--set", "unknown key '" + key + "' (dt, p_e, r_e, step_distance, horizon)");
  }
}

}  // namespace sphereclamp::io
