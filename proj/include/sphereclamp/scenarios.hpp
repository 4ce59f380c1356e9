#ifndef SPHERECLAMP_SCENARIOS_HPP
#define SPHERECLAMP_SCENARIOS_HPP

#include <optional>
#include <string>
#include <vector>

#include "sphereclamp/sim.hpp"

namespace sphereclamp::scenarios {

// Square waypoint offsets: diagonal of 200 mm, corners on the x and y axes.
inline constexpr double kSquareHalfDiagonal = 100.0;

/// Names of the compiled-in scenarios, in listing order.
std::vector<std::string> builtin_names();

/// Compiled-in scenario by name, or nullopt.
std::optional<sim::Scenario> builtin(const std::string& name);

// Limb surrogates of the heterogeneous test bench: one heavy 7-joint arm,
// four quadruped legs (mirrored, the body is turned half a turn) and one light
// 7-joint arm.
sim::LimbModel heavy_limb();
sim::LimbModel quadruped_leg(int index);
sim::LimbModel light_limb();

/// Base translation of each limb of the six-limb bench.
std::vector<Eigen::Vector3d> bench_bases();

/// +1 for arms, -1 for the mirrored quadruped legs.
std::vector<double> bench_mirror();

sim::Scenario out_of_range();
sim::Scenario nominal_square();
sim::Scenario power_loss();
sim::Scenario robustness_mix();

}  // namespace sphereclamp::scenarios

#endif
