#ifndef SPHERECLAMP_ORACLES_HPP
#define SPHERECLAMP_ORACLES_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sphereclamp/multi_ee.hpp"

/**
 * @file oracles.hpp
 *
 * Brute-force reference computations used by `sphereclamp verify` and the
 * test suites. The dense clamp and SLERP references never go through the
 * library's interpolation or metrics: trajectories are rebuilt with Eigen's
 * own slerp and angles come from Eigen::AngleAxisd.
 */

namespace sphereclamp::oracles {

inline constexpr int kDenseSamples = 1'000'000;

/// Largest t on a dense descending grid of `samples` points such that the
/// 1D LERP point lies within 1 of `sensed`, or nullopt if none does.
std::optional<double> dense_argmax_t_1d(double sensed, double start, double finish,
                                        int samples = kDenseSamples);

/// Same for the stacked SE(3)^n trajectory and metric.
std::optional<double> dense_argmax_t_stacked(const MultiPose& sensed, const MultiPose& start,
                                             const MultiPose& finish,
                                             const MultiMetricParams& metric,
                                             int samples = kDenseSamples);

struct ClampOracleReport {
  int instances = 0;
  int agreed = 0;
  int verdict_mismatches = 0;
  int tolerance_failures = 0;
  int no_solution_instances = 0;
  /// max |t_alg - t_oracle| * (I - 1); <= 1 passes.
  double max_ratio = 0.0;
  double seconds = 0.0;
  std::vector<std::string> failures;

  bool passed() const { return instances > 0 && agreed == instances; }
};

/// Randomized instances cycling through 1D LERP and SE(3)^n with n in {1, 2, 6}.
ClampOracleReport run_clamp_oracle_suite(int instances, std::uint64_t seed,
                                         int oracle_samples = kDenseSamples);

struct AxiomCounts {
  std::string metric;
  int triples = 0;
  int negative = 0;
  int identity = 0;
  int symmetry = 0;
  int triangle = 0;
  double max_triangle_excess = 0.0;

  int violations() const { return negative + identity + symmetry + triangle; }
};

struct MetricAxiomReport {
  std::vector<AxiomCounts> metrics;
  bool passed() const;
};

/// Axioms of weighted Euclidean, SE(3) and stacked (k = 1, 2, 3, inf)
/// metrics on `triples` random triples each.
MetricAxiomReport run_metric_axiom_suite(int triples, std::uint64_t seed, double tol = 1e-9);

struct SlerpReport {
  int cases = 0;
  double max_geodesic_deviation = 0.0;
  double max_endpoint_error = 0.0;
  double max_sign_deviation = 0.0;
  double max_velocity_deviation = 0.0;

  bool passed(double geodesic_tol = 1e-9, double property_tol = 1e-8) const {
    return cases > 0 && max_geodesic_deviation <= geodesic_tol &&
           max_endpoint_error <= property_tol && max_sign_deviation <= property_tol &&
           max_velocity_deviation <= property_tol;
  }
};

/// SLERP against exp(t log(R_S^-1 R_F)) built from Eigen::AngleAxisd, plus
/// endpoint, sign and angular-velocity checks.
SlerpReport run_slerp_suite(int cases, std::uint64_t seed);

/// Uniformly distributed random rotation.
Eigen::Quaterniond random_quaternion(std::mt19937_64& rng);

}  // namespace sphereclamp::oracles

#endif
