#include "sphereclamp/sim.hpp"

#include <algorithm>
#include <cmath>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "sphereclamp/scenarios.hpp"

namespace sphereclamp::sim {
namespace {

using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

LimbModel fast_limb(const std::string& name) {
  LimbModel l;
  l.name = name;
  l.max_ee_speed = 100.0;
  l.tracking_gain = 1000.0;
  return l;
}

Pose at(double x, double y = 0.0, double z = 0.0) { return Pose(Eigen::Vector3d(x, y, z)); }

// One limb walking 0 -> 50 mm along x.
Scenario line_scenario() {
  Scenario s;
  s.name = "line";
  s.limbs = {fast_limb("a")};
  PathSpec path;
  path.waypoints = {MultiPose({"a"}, {at(0)}), MultiPose({"a"}, {at(50)})};
  s.program = PathProgram{path};
  s.metric = MultiMetricParams::uniform(1, Se3MetricParams{5.0, kInf});
  s.dt = 0.01;
  s.horizon = 2.0;
  return s;
}

TEST(LimbStep, SpeedCapLimitsStep) {
  const Pose next = limb_step(fast_limb("a"), at(0), at(50), {}, 0.01);
  EXPECT_NEAR(next.v.x(), 1.0, 1e-12);
  EXPECT_EQ(next.v.y(), 0.0);
}

TEST(LimbStep, FirstOrderPursuitBelowCap) {
  LimbModel l = fast_limb("a");
  l.tracking_gain = 10.0;  // alpha = 0.1
  const Pose next = limb_step(l, at(0), at(5), {}, 0.01);
  EXPECT_NEAR(next.v.x(), 0.5, 1e-12);
}

TEST(LimbStep, ClipsToWorkspace) {
  LimbModel l = fast_limb("a");
  l.workspace = Box{Eigen::Vector3d(-1, -1, -1), Eigen::Vector3d(0.5, 1, 1)};
  const Pose next = limb_step(l, at(0), at(50), {}, 0.01);
  EXPECT_EQ(next.v.x(), 0.5);
}

TEST(LimbStep, DisturbancesModifyMotion) {
  Disturbance block{DisturbanceKind::kBlock, "a", 0.0, 1.0};
  EXPECT_EQ(limb_step(fast_limb("a"), at(3), at(50), {block}, 0.01), at(3));
  Disturbance slow{DisturbanceKind::kSlowdown, "a", 0.0, 1.0, 0.25};
  EXPECT_NEAR(limb_step(fast_limb("a"), at(0), at(50), {slow}, 0.01).v.x(), 0.25, 1e-12);
}

TEST(LimbStep, RotationFollowsCommand) {
  LimbModel l = fast_limb("a");
  const Pose cmd(Eigen::Vector3d::Zero(), Rotation::rot_z(0.2));
  const Pose next = limb_step(l, at(0), cmd, {}, 0.01);
  EXPECT_TRUE(next.rotation.same_rotation(Rotation::rot_z(0.2), 1e-12));
}

TEST(RunScenario, LineReachesEndSafely) {
  const Trace trace = run_scenario(line_scenario());
  ASSERT_EQ(trace.records.size(), 200u);
  EXPECT_EQ(trace.safety_violations, 0u);
  EXPECT_EQ(trace.records.back().command[0], at(50));
  EXPECT_EQ(trace.records.front().time, 0.0);
  for (const auto& r : trace.records) ASSERT_LE(r.dist[0], 1.0 + kSafetyTolerance);
}

TEST(RunScenario, IsDeterministic) {
  Scenario s = *scenarios::builtin("robustness_mix");
  s.horizon = 15.0;
  std::erase_if(s.disturbances, [&s](const Disturbance& d) { return d.end() > s.horizon; });
  const Trace a = run_scenario(s);
  const Trace b = run_scenario(s);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    ASSERT_EQ(a.records[k].command, b.records[k].command);
    ASSERT_EQ(a.records[k].sensed, b.records[k].sensed);
    ASSERT_EQ(a.records[k].t, b.records[k].t);
  }
  EXPECT_EQ(a.no_solution_events, b.no_solution_events);
}

TEST(RunScenario, ParallelScanGivesIdenticalTrace) {
  Scenario s = *scenarios::builtin("nominal_square");
  s.horizon = 3.0;
  const Trace serial = run_scenario(s);
  s.clamp.scan = ScanPolicy::kParallel;
  const Trace parallel = run_scenario(s);
  ASSERT_EQ(serial.records.size(), parallel.records.size());
  for (std::size_t k = 0; k < serial.records.size(); ++k) {
    ASSERT_EQ(serial.records[k].command, parallel.records[k].command);
  }
}

TEST(RunScenario, FreezeHoldsSensorAndPlant) {
  Scenario s = line_scenario();
  s.limbs[0].max_ee_speed = 20.0;
  s.disturbances = {Disturbance{DisturbanceKind::kFreeze, "a", 0.5, 0.3}};
  const Trace trace = run_scenario(s);
  // Steps 50..79 are frozen: the reading never changes.
  const Pose frozen = trace.records[50].sensed[0];
  for (int k = 50; k < 80; ++k) ASSERT_EQ(trace.records[k].sensed[0], frozen);
  EXPECT_NE(trace.records[80].sensed[0], trace.records[81].sensed[0]);
  EXPECT_EQ(trace.safety_violations, 0u);
}

TEST(RunScenario, PowerCycleJumpsByExactOffset) {
  Scenario s = line_scenario();
  s.limbs[0].max_ee_speed = 20.0;
  s.limbs[0].sensor_period = 0.03;
  const Eigen::Vector3d offset(3.0, -4.0, 12.0);
  s.disturbances = {Disturbance{DisturbanceKind::kPowerCycle, "a", 0.51, 0.3, 1.0, offset}};
  const Trace trace = run_scenario(s);
  const Pose held = trace.records[51].sensed[0];
  for (int k = 51; k < 81; ++k) ASSERT_EQ(trace.records[k].sensed[0], held);
  EXPECT_LE((trace.records[81].sensed[0].v - held.v - offset).norm(), 1e-12);
  EXPECT_EQ(trace.safety_violations, 0u);
}

// While frozen limbs sit at their ball boundary, the shared t moves by at most
// one grid step per control step.
TEST(RunScenario, BoundaryLimbGatesSharedProgress) {
  const Scenario s = *scenarios::builtin("power_loss");
  const PathSpec& path = std::get<PathProgram>(s.program).path;
  const Disturbance& cut = s.disturbances.at(0);
  const Trace trace = run_scenario(s);
  int gated = 0;
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& prev = trace.records[k - 1];
    const auto& r = trace.records[k];
    if (!cut.active_at(prev.time) || !cut.active_at(r.time)) continue;
    if (r.segment != prev.segment || r.mode != ControlMode::kTracking) continue;
    bool frozen_at_boundary = false;
    for (std::size_t i = 0; i < r.dist.size(); ++i) {
      frozen_at_boundary = frozen_at_boundary || (cut.hits(trace.limb_names[i]) &&
                                                  r.dist[i] >= 1.0 - s.clamp.step_distance);
    }
    if (!frozen_at_boundary) continue;
    const Segment seg = path.segment(r.segment);
    const int samples = sample_count(seg.start, seg.finish, StackedMetric(s.metric), s.clamp);
    ASSERT_LE(r.t - prev.t, grid_step(samples) + 1e-12) << "time " << r.time;
    ++gated;
  }
  EXPECT_GT(gated, 50);
}

TEST(RunScenario, DisplacementAppliedWhenWindowCloses) {
  Scenario s = line_scenario();
  s.disturbances = {Disturbance{DisturbanceKind::kDisplace, "a", 0.5, 0.1, 1.0,
                                Eigen::Vector3d(0, 20, 0)}};
  const Trace trace = run_scenario(s);
  EXPECT_NEAR(trace.records[59].sensed[0].v.y(), 0.0, 1e-12);
  EXPECT_NEAR(trace.records[60].sensed[0].v.y(), 20.0, 1e-12);
  EXPECT_GE(trace.no_solution_events, 1u);
  EXPECT_GE(trace.recovery_count, 1u);
  EXPECT_EQ(trace.safety_violations, 0u);
  EXPECT_EQ(trace.records.back().command[0], at(50));
}

TEST(RunScenario, LatencyDelaysMotion) {
  Scenario s = line_scenario();
  s.limbs[0].command_latency = 0.05;
  const Trace trace = run_scenario(s);
  for (int k = 0; k <= 5; ++k) ASSERT_EQ(trace.records[k].sensed[0], at(0));
  EXPECT_GT(trace.records[6].sensed[0].v.x(), 0.0);
}

TEST(RunScenario, SensorPeriodHoldsReadings) {
  Scenario s = line_scenario();
  s.limbs[0].sensor_period = 0.05;
  const Trace trace = run_scenario(s);
  EXPECT_EQ(trace.records[6].sensed[0], trace.records[9].sensed[0]);
  EXPECT_NE(trace.records[9].sensed[0], trace.records[10].sensed[0]);
}

TEST(RunScenario, JitterIsSeeded) {
  Scenario s = line_scenario();
  s.disturbances = {Disturbance{DisturbanceKind::kFreeze, "a", 0.5, 0.3}};
  s.disturbance_jitter = 0.2;
  s.seed = 1;
  const Trace a = run_scenario(s);
  const Trace b = run_scenario(s);
  s.seed = 2;
  const Trace c = run_scenario(s);
  bool same_ab = true, same_ac = true;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    same_ab = same_ab && a.records[k].sensed == b.records[k].sensed;
    same_ac = same_ac && a.records[k].sensed == c.records[k].sensed;
  }
  EXPECT_TRUE(same_ab);
  EXPECT_FALSE(same_ac);
}

TEST(SpeedProgram, VelocityPhases) {
  SpeedProgram p{MultiPose({"a"}, {at(0)}),
                 {SpeedPhase{1.0, Eigen::Vector3d(1, 0, 0)}, SpeedPhase{2.0, Eigen::Vector3d(0, 2, 0)}}};
  EXPECT_EQ(p.velocity_at(0.5), Eigen::Vector3d(1, 0, 0));
  EXPECT_EQ(p.velocity_at(1.5), Eigen::Vector3d(0, 2, 0));
  EXPECT_EQ(p.velocity_at(3.5), Eigen::Vector3d::Zero());
}

TEST(Validate, ReportsFieldPaths) {
  Scenario s = line_scenario();
  s.dt = -1.0;
  s.limbs[0].max_ee_speed = 0.0;
  s.disturbances = {Disturbance{DisturbanceKind::kBlock, "nobody", 0.1, 0.1}};
  try {
    validate(s);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const auto& issues = e.issues();
    const auto has = [&issues](const std::string& prefix) {
      return std::any_of(issues.begin(), issues.end(),
                         [&prefix](const std::string& i) { return i.rfind(prefix, 0) == 0; });
    };
    EXPECT_TRUE(has("dt:"));
    EXPECT_TRUE(has("limbs[0].max_ee_speed:"));
    EXPECT_TRUE(has("disturbances[0].target:"));
    EXPECT_THAT(e.what(), HasSubstr("nobody"));
  }
}

TEST(Validate, MetricSizeMustMatchLimbs) {
  Scenario s = line_scenario();
  s.metric = MultiMetricParams::uniform(2, Se3MetricParams{});
  EXPECT_THROW(validate(s), ValidationError);
  EXPECT_THROW(run_scenario(s), ValidationError);
}

TEST(Validate, InitialPoseOutsideWorkspace) {
  Scenario s = line_scenario();
  s.limbs[0].workspace = Box{Eigen::Vector3d(10, -1, -1), Eigen::Vector3d(20, 1, 1)};
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Builtins, AllValidateAndRoundTripNames) {
  for (const auto& name : scenarios::builtin_names()) {
    const auto s = scenarios::builtin(name);
    ASSERT_TRUE(s.has_value()) << name;
    EXPECT_EQ(s->name, name);
    EXPECT_NO_THROW(validate(*s)) << name;
  }
  EXPECT_FALSE(scenarios::builtin("no_such_scenario").has_value());
}

TEST(DisturbanceKindNames, RoundTrip) {
  for (auto k : {DisturbanceKind::kBlock, DisturbanceKind::kSlowdown, DisturbanceKind::kFreeze,
                 DisturbanceKind::kDisplace, DisturbanceKind::kPowerCycle}) {
    EXPECT_EQ(disturbance_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(disturbance_kind_from_string("explode").has_value());
}

}  // namespace
}  // namespace sphereclamp::sim
