#ifndef SPHERECLAMP_SIM_HPP
#define SPHERECLAMP_SIM_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "sphereclamp/controller.hpp"
#include "sphereclamp/metric_core.hpp"
#include "sphereclamp/multi_ee.hpp"

namespace sphereclamp::sim {

/// Axis-aligned reachability box, mm.
struct Box {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;

  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
  Eigen::Vector3d clip(const Eigen::Vector3d& p) const { return p.cwiseMax(lo).cwiseMin(hi); }
};

/// End-effector surrogate of a physical limb: first-order pursuit of the
/// command, speed-capped and clipped to a workspace box.
struct LimbModel {
  std::string name;
  double max_ee_speed = 100.0;  ///< mm/s
  Box workspace{Eigen::Vector3d::Constant(-1e4), Eigen::Vector3d::Constant(1e4)};
  double tracking_gain = 5.0;    ///< 1/s
  double sensor_period = 0.0;    ///< s; 0 means every step
  double command_latency = 0.0;  ///< s
};

enum class DisturbanceKind { kBlock, kSlowdown, kFreeze, kDisplace, kPowerCycle };

std::string_view to_string(DisturbanceKind kind);
std::optional<DisturbanceKind> disturbance_kind_from_string(std::string_view name);

/// Target "ALL" hits every limb.
inline constexpr const char* kAllLimbs = "ALL";

/**
 * Scheduled fault over [start, start + duration).
 *
 *  - Block: the limb holds its position.
 *  - Slowdown: speed cap scaled by `factor`.
 *  - Freeze: no motion and no sensor updates.
 *  - Displace: `offset` added to the limb pose when the window closes.
 *  - PowerCycle: Freeze, then `offset` applied on restore.
 */
struct Disturbance {
  DisturbanceKind kind = DisturbanceKind::kBlock;
  std::string target;
  double start = 0.0;
  double duration = 0.0;
  double factor = 1.0;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  double end() const { return start + duration; }
  bool active_at(double time) const { return time >= start && time < end(); }
  bool hits(const std::string& limb) const { return target == kAllLimbs || target == limb; }
};

/// Path-following program.
struct PathProgram {
  PathSpec path;
};

/// Constant linear speed over consecutive phases.
struct SpeedPhase {
  double duration = 0.0;  ///< s
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  ///< mm/s
};

struct SpeedProgram {
  MultiPose initial;
  std::vector<SpeedPhase> phases;

  /// Velocity at `elapsed` seconds since the program started; zero after the
  /// last phase.
  Eigen::Vector3d velocity_at(double elapsed) const;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<LimbModel> limbs;
  std::variant<PathProgram, SpeedProgram> program;
  MultiMetricParams metric;
  ClampConfig clamp;
  RecoveryStrategy strategy = RecoveryStrategy::kReturnToLastValid;
  std::vector<Disturbance> disturbances;
  double dt = 0.01;
  double start_time = 0.0;
  double horizon = 10.0;
  std::uint64_t seed = 0;
  /// Half-width of a uniform shift applied to every disturbance start, drawn
  /// from `seed`. Zero disables it.
  double disturbance_jitter = 0.0;

  /// Initial pose of every limb (start of the path or of the speed program).
  const MultiPose& initial_pose() const;
};

/// Collected validation failures, one "field.path: message" per entry.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Throws ValidationError listing every problem found.
void validate(const Scenario& scenario);

/// One simulation step. `sensed` / `command` are the values the controller saw
/// and produced at `time`.
struct TraceRecord {
  double time = 0.0;
  std::vector<Pose> sensed;
  std::vector<Pose> command;
  std::vector<double> dist;
  double t = 0.0;
  int segment = 0;
  ControlMode mode = ControlMode::kTracking;
};

struct Trace {
  std::vector<std::string> limb_names;
  std::vector<TraceRecord> records;
  std::uint64_t no_solution_events = 0;
  std::uint64_t recovery_count = 0;
  std::uint64_t safety_violations = 0;
  int laps = 0;
};

/// Tolerance of the "command within the ball" safety check.
inline constexpr double kSafetyTolerance = 1e-9;

/// Steady-state disturbances that act on the plant at this instant.
std::vector<Disturbance> active_disturbances(const std::vector<Disturbance>& all,
                                             const std::string& limb, double time);

/// Advance one limb by dt toward `command`. Freeze/PowerCycle/Block hold the
/// pose; Slowdown scales the speed cap.
Pose limb_step(const LimbModel& limb, const Pose& sensed, const Pose& command,
               const std::vector<Disturbance>& active, double dt);

/// Fixed-step deterministic run of a validated scenario.
Trace run_scenario(const Scenario& scenario);

}  // namespace sphereclamp::sim

#endif
