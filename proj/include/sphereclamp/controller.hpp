#ifndef SPHERECLAMP_CONTROLLER_HPP
#define SPHERECLAMP_CONTROLLER_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sphereclamp/metric_core.hpp"
#include "sphereclamp/multi_ee.hpp"

namespace sphereclamp {

enum class ControlMode { kTracking, kRecovering, kWaiting };

std::string_view to_string(ControlMode mode);

/// What the tracking controller does when no trajectory sample is in the ball.
enum class RecoveryStrategy {
  kReturnToLastValid,  ///< move to the last valid command, then resume
  kNearestSample,      ///< command the closest sample (may leave the ball)
  kRestartToF,         ///< replace the segment by (sensed -> segment end)
};

std::string_view to_string(RecoveryStrategy strategy);

/// A straight stacked LERP/SLERP trajectory.
struct Segment {
  MultiPose start;
  MultiPose finish;
};

/// Piecewise path through waypoints. With `loop`, the last waypoint connects
/// back to the first. Zero-length segments are skipped.
struct PathSpec {
  std::vector<MultiPose> waypoints;
  bool loop = false;

  void validate() const;
  int segment_count() const;
  Segment segment(int index) const;
  bool is_degenerate(int index) const;
};

/// Linear speed applied to every end-effector, mm/s.
struct SpeedInput {
  Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();
};

struct ControllerState {
  ControlMode mode = ControlMode::kTracking;
  int segment_index = 0;
  /// Parameter of the most recent on-path command within the current segment.
  double t = 0.0;
  /// Lower bound on t within the current segment.
  double t_floor = 0.0;
  MultiPose last_command;
  MultiPose last_valid_point;
  std::optional<Segment> recovery_path;
  double recovery_t_floor = 0.0;
  /// Set by the restart-to-F strategy; replaces the current segment.
  std::optional<Segment> segment_override;
  bool finished = false;
  int laps = 0;
  std::uint64_t no_solution_events = 0;
  std::uint64_t recovery_count = 0;
  std::uint64_t recovery_replans = 0;

  /// State at the beginning of `path`.
  static ControllerState start_of(const PathSpec& path);
  /// State holding `pose` as the current command.
  static ControllerState holding(const MultiPose& pose);

 private:
  explicit ControllerState(const MultiPose& pose) : last_command(pose), last_valid_point(pose) {}
};

struct StepResult {
  ControllerState state;
  MultiPose command;
};

/// One control step along `path`. On a solution, the command is the clamped
/// trajectory point; otherwise `strategy` decides.
StepResult step_tracking(const ControllerState& state, const MultiPose& sensed,
                         const PathSpec& path, const MultiMetricParams& metric,
                         const ClampConfig& cfg,
                         RecoveryStrategy strategy = RecoveryStrategy::kReturnToLastValid);

/// One step of speed integration: clamps onto the micro-segment from the last
/// command to the last command shifted by speed * dt. Without a solution the
/// command is held and the mode becomes Waiting.
StepResult step_speed(const ControllerState& state, const MultiPose& sensed,
                      const SpeedInput& speed, double dt, const MultiMetricParams& metric,
                      const ClampConfig& cfg);

/// Reaction to a no-solution outcome on `segment`.
StepResult handle_no_solution(const ControllerState& state, const MultiPose& sensed,
                              const ClampNoSolution<MultiPose>& outcome, const Segment& segment,
                              RecoveryStrategy strategy, const MultiMetricParams& metric,
                              const ClampConfig& cfg);

/// Segment currently being tracked (including a restart override).
Segment active_segment(const ControllerState& state, const PathSpec& path);

}  // namespace sphereclamp

#endif
