#include "sphereclamp/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace sphereclamp::scenarios {
namespace {

using sim::Disturbance;
using sim::DisturbanceKind;
using sim::LimbModel;
using sim::Scenario;

constexpr double kBenchDt = 0.01;
constexpr double kSquarePe = 20.0;  // mm

sim::Box box_around(const Eigen::Vector3d& center, double half) {
  return {center.array() - half, center.array() + half};
}

std::vector<LimbModel> bench_limbs() {
  std::vector<LimbModel> limbs{heavy_limb()};
  for (int i = 1; i <= 4; ++i) limbs.push_back(quadruped_leg(i));
  limbs.push_back(light_limb());
  const auto bases = bench_bases();
  for (std::size_t i = 0; i < limbs.size(); ++i) limbs[i].workspace = box_around(bases[i], 300.0);
  return limbs;
}

std::vector<std::string> names_of(const std::vector<LimbModel>& limbs) {
  std::vector<std::string> names;
  for (const auto& l : limbs) names.push_back(l.name);
  return names;
}

PathSpec bench_square(const std::vector<LimbModel>& limbs) {
  const double h = kSquareHalfDiagonal;
  const std::vector<Eigen::Vector3d> corners{
      {-h, 0.0, 0.0}, {0.0, -h, 0.0}, {h, 0.0, 0.0}, {0.0, h, 0.0}};
  const auto bases = bench_bases();
  const auto mirror = bench_mirror();
  // Arms hold the tool pointing down; legs have no wrist.
  const Rotation tool_down = Rotation::rot_y(std::numbers::pi);

  std::vector<std::string> names = names_of(limbs);
  PathSpec path;
  path.loop = true;
  for (const auto& c : corners) {
    std::vector<Pose> poses;
    for (std::size_t i = 0; i < limbs.size(); ++i) {
      const Rotation r = mirror[i] > 0 ? tool_down : Rotation();
      poses.emplace_back(bases[i] + mirror[i] * c, r);
    }
    path.waypoints.emplace_back(names, poses);
  }
  return path;
}

Scenario square_base(const std::string& name) {
  Scenario s;
  s.name = name;
  s.limbs = bench_limbs();
  s.program = sim::PathProgram{bench_square(s.limbs)};
  s.metric = MultiMetricParams::uniform(
      s.limbs.size(), Se3MetricParams{kSquarePe, std::numeric_limits<double>::infinity()});
  s.dt = kBenchDt;
  return s;
}

Disturbance make(DisturbanceKind kind, const std::string& target, double start, double duration,
                 double factor = 1.0, Eigen::Vector3d offset = Eigen::Vector3d::Zero()) {
  Disturbance d;
  d.kind = kind;
  d.target = target;
  d.start = start;
  d.duration = duration;
  d.factor = factor;
  d.offset = offset;
  return d;
}

std::string leg(int i) { return "quad_" + std::to_string(i); }

// Post-fall offsets of the four legs; every norm is at most 60 mm.
const std::vector<Eigen::Vector3d>& fall_offsets() {
  static const std::vector<Eigen::Vector3d> offsets{
      {0.0, 0.0, -60.0}, {20.0, 0.0, -55.0}, {-15.0, 10.0, -50.0}, {10.0, -20.0, -45.0}};
  return offsets;
}

}  // namespace

LimbModel heavy_limb() {
  LimbModel l;
  l.name = "heavy";
  l.max_ee_speed = 60.0;
  l.tracking_gain = 2.0;
  l.sensor_period = 0.02;
  l.command_latency = 0.02;
  return l;
}

LimbModel quadruped_leg(int index) {
  LimbModel l;
  l.name = leg(index);
  l.max_ee_speed = 400.0;
  l.tracking_gain = 8.0;
  l.sensor_period = 0.01;
  l.command_latency = 0.01;
  return l;
}

LimbModel light_limb() {
  LimbModel l;
  l.name = "light";
  l.max_ee_speed = 600.0;
  l.tracking_gain = 6.0;
  l.sensor_period = 0.05;
  l.command_latency = 0.05;
  return l;
}

std::vector<Eigen::Vector3d> bench_bases() {
  return {{500.0, 0.0, 300.0},    {180.0, 120.0, -150.0}, {180.0, -120.0, -150.0},
          {-180.0, -120.0, -150.0}, {-180.0, 120.0, -150.0}, {-500.0, 0.0, 300.0}};
}

std::vector<double> bench_mirror() { return {1.0, -1.0, -1.0, -1.0, -1.0, 1.0}; }

std::vector<std::string> builtin_names() {
  return {"out_of_range", "nominal_square", "power_loss", "robustness_mix"};
}

std::optional<Scenario> builtin(const std::string& name) {
  if (name == "out_of_range") return out_of_range();
  if (name == "nominal_square") return nominal_square();
  if (name == "power_loss") return power_loss();
  if (name == "robustness_mix") return robustness_mix();
  return std::nullopt;
}

Scenario out_of_range() {
  Scenario s;
  s.name = "out_of_range";
  s.description =
      "heavy limb driven up at 30 mm/s past its workspace ceiling for 22 s, then back down";
  LimbModel limb = heavy_limb();
  const Eigen::Vector3d start{0.0, 0.0, 300.0};
  limb.workspace = {{-500.0, -500.0, -300.0}, {500.0, 500.0, start.z() + 550.0}};
  s.limbs = {limb};

  sim::SpeedProgram program{MultiPose({limb.name}, {Pose(start, Rotation::rot_y(std::numbers::pi))}),
                            {{22.0, {0.0, 0.0, 30.0}}, {22.0, {0.0, 0.0, -30.0}}}};
  s.program = program;
  s.metric = MultiMetricParams::uniform(1, Se3MetricParams{50.0, 30.0 * std::numbers::pi / 180.0});
  s.dt = kBenchDt;
  s.horizon = 44.0;
  return s;
}

Scenario nominal_square() {
  Scenario s = square_base("nominal_square");
  s.description = "six heterogeneous limbs looping a 200 mm-diagonal square, no disturbances";
  s.horizon = 60.0;
  return s;
}

Scenario power_loss() {
  Scenario s = square_base("power_loss");
  s.description =
      "square loop; the four quadruped legs lose power at 718 s for 2 s and fall before restore";
  s.start_time = 700.0;
  s.horizon = 40.0;
  for (int i = 1; i <= 4; ++i) {
    s.disturbances.push_back(make(DisturbanceKind::kPowerCycle, leg(i), 718.0, 2.0, 1.0,
                                  fall_offsets()[static_cast<std::size_t>(i - 1)]));
  }
  return s;
}

Scenario robustness_mix() {
  Scenario s = square_base("robustness_mix");
  s.description =
      "120 s square loop under a scaled mix of blockages, slowdowns, disassemblies, power losses "
      "and an arm fault";
  s.horizon = 120.0;

  // Occasion counts follow the long unsupervised run: 8 blockages, 2
  // slowdowns, 10 disassemblies, 7 quadruped power losses, 1 light-arm power
  // loss, 1 heavy-arm IK fault.
  enum Event { kBlockLeg, kSlowLeg, kDisassemble, kFall, kLightOff, kHeavyFault };
  const std::vector<Event> order{
      kBlockLeg, kDisassemble, kSlowLeg, kFall,   kBlockLeg,   kDisassemble, kFall,  kBlockLeg,
      kDisassemble, kLightOff, kFall,   kBlockLeg, kDisassemble, kHeavyFault, kFall, kDisassemble,
      kBlockLeg, kSlowLeg, kDisassemble, kFall, kBlockLeg,   kDisassemble, kFall,  kDisassemble,
      kBlockLeg, kDisassemble, kFall,   kBlockLeg, kDisassemble};

  const double spacing = 3.4;
  double time = 4.0;
  int rot = 0;
  for (Event e : order) {
    const int a = rot % 4 + 1;
    const int b = (rot + 1) % 4 + 1;
    const int c = (rot + 2) % 4 + 1;
    switch (e) {
      case kBlockLeg:
        s.disturbances.push_back(make(DisturbanceKind::kBlock, leg(a), time, 1.5));
        break;
      case kSlowLeg:
        s.disturbances.push_back(make(DisturbanceKind::kSlowdown, leg(a), time, 3.0, 0.3));
        break;
      case kDisassemble: {
        // One to three legs pulled off and put back slightly off their pose.
        const int count = rot % 3 + 1;
        const int legs[3] = {a, b, c};
        for (int j = 0; j < count; ++j) {
          const double sx = (j % 2 == 0) ? 1.0 : -1.0;
          s.disturbances.push_back(make(DisturbanceKind::kDisplace, leg(legs[j]), time, 1.0, 1.0,
                                        {25.0 * sx, 15.0, -30.0}));
        }
        break;
      }
      case kFall:
        for (int i = 1; i <= 4; ++i) {
          s.disturbances.push_back(make(DisturbanceKind::kPowerCycle, leg(i), time, 1.5, 1.0,
                                        fall_offsets()[static_cast<std::size_t>(i - 1)]));
        }
        break;
      case kLightOff:
        s.disturbances.push_back(make(DisturbanceKind::kFreeze, "light", time, 2.0));
        break;
      case kHeavyFault:
        s.disturbances.push_back(
            make(DisturbanceKind::kDisplace, "heavy", time, 0.2, 1.0, {0.0, 20.0, -25.0}));
        break;
    }
    time += spacing;
    ++rot;
  }
  return s;
}

}  // namespace sphereclamp::scenarios
