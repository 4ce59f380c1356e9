#ifndef SPHERECLAMP_METRIC_CORE_HPP
#define SPHERECLAMP_METRIC_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

/**
 * @file metric_core.hpp
 *
 * Generic hypersphere clamping over an arbitrary point type, trajectory
 * function and distance function.
 *
 * A trajectory is any callable `traj(t, start, finish) -> Point` with
 * `traj(0, S, F) == S` and `traj(1, S, F) == F`. A metric is any callable
 * `d(a, b) -> double`, pre-scaled so that the allowed deviation around the
 * sensed state is the unit ball.
 */

namespace sphereclamp {

/// How the sample grid is scanned. Both policies return identical outcomes.
enum class ScanPolicy {
  kSerial,    ///< descending scan with early exit (reference kernel)
  kParallel,  ///< OpenMP evaluation of the whole grid, then selection
};

struct ClampConfig {
  /// Spacing between consecutive samples, in metric units.
  double step_distance = 0.01;
  int min_samples = 2;
  int max_samples = 1'000'000;
  /// Consulted by the controller only; the raw clamp never enforces it.
  bool enforce_monotonic_t = true;
  ScanPolicy scan = ScanPolicy::kSerial;

  void validate() const {
    if (!(step_distance > 0.0) || !std::isfinite(step_distance)) {
      throw std::invalid_argument("step_distance must be finite and > 0");
    }
    if (min_samples < 2) {
      throw std::invalid_argument("min_samples must be >= 2");
    }
    if (max_samples < min_samples) {
      throw std::invalid_argument("max_samples must be >= min_samples");
    }
  }
};

template <typename Point>
struct ClampSolution {
  Point point;
  double t;
  double dist;
};

/// No grid point lies in the ball; carries the closest one (ties: larger t).
template <typename Point>
struct ClampNoSolution {
  Point nearest_point;
  double nearest_t;
  double nearest_dist;
};

template <typename Point>
using ClampOutcome = std::variant<ClampSolution<Point>, ClampNoSolution<Point>>;

template <typename Point>
bool has_solution(const ClampOutcome<Point>& outcome) {
  return std::holds_alternative<ClampSolution<Point>>(outcome);
}

/// Grid value i of a descending grid of `samples` points, 1 at i = 0 and 0 at
/// i = samples - 1.
inline double grid_t(int i, int samples) {
  if (i == samples - 1) return 0.0;
  return 1.0 - static_cast<double>(i) / static_cast<double>(samples - 1);
}

/// Spacing of the sample grid in t.
inline double grid_step(int samples) {
  return 1.0 / static_cast<double>(samples - 1);
}

/// Number of trajectory samples: ceil(d(S, F) / step_distance), clamped to
/// [min_samples, max_samples].
template <typename Point, typename Metric>
int sample_count(const Point& start, const Point& finish, Metric&& metric,
                 const ClampConfig& cfg) {
  cfg.validate();
  const double span = metric(start, finish);
  if (std::isnan(span)) return cfg.max_samples;
  const double raw = std::ceil(span / cfg.step_distance);
  if (raw <= static_cast<double>(cfg.min_samples)) return cfg.min_samples;
  if (raw >= static_cast<double>(cfg.max_samples)) return cfg.max_samples;
  return static_cast<int>(raw);
}

namespace detail {

inline void check_samples(int samples) {
  if (samples < 2) {
    throw std::invalid_argument("hypersphere_clamp needs at least 2 samples, got " +
                                std::to_string(samples));
  }
}

}  // namespace detail

/**
 * Reference kernel. Walks t from 1 down to 0 over `samples` evenly spaced
 * grid values and returns the first point with d(point, sensed) <= 1.
 *
 * The feasible set need not be an interval, so no bisection: the first hit in
 * descending order is the grid argmax of t.
 */
template <typename Point, typename Trajectory, typename Metric>
ClampOutcome<Point> hypersphere_clamp(const Point& sensed, const Point& start,
                                      const Point& finish, Trajectory&& traj,
                                      Metric&& metric, int samples) {
  detail::check_samples(samples);
  int best_index = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = grid_t(i, samples);
    Point p = traj(t, start, finish);
    const double dist = metric(p, sensed);
    if (dist <= 1.0) {
      return ClampSolution<Point>{std::move(p), t, dist};
    }
    if (dist < best_dist || best_index < 0) {
      best_dist = dist;
      best_index = i;
    }
  }
  const double t = grid_t(best_index, samples);
  return ClampNoSolution<Point>{traj(t, start, finish), t, best_dist};
}

/**
 * OpenMP kernel. Evaluates every grid distance in parallel, then selects the
 * same sample the reference kernel would. `traj` and `metric` must be safe to
 * call concurrently.
 */
template <typename Point, typename Trajectory, typename Metric>
ClampOutcome<Point> hypersphere_clamp_parallel(const Point& sensed,
                                               const Point& start,
                                               const Point& finish,
                                               Trajectory&& traj,
                                               Metric&& metric, int samples) {
  detail::check_samples(samples);
  std::vector<double> dist(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < samples; ++i) {
    dist[static_cast<std::size_t>(i)] =
        metric(traj(grid_t(i, samples), start, finish), sensed);
  }

  int best_index = 0;
  for (int i = 0; i < samples; ++i) {
    const double di = dist[static_cast<std::size_t>(i)];
    if (di <= 1.0) {
      const double t = grid_t(i, samples);
      return ClampSolution<Point>{traj(t, start, finish), t, di};
    }
    if (di < dist[static_cast<std::size_t>(best_index)]) best_index = i;
  }
  const double t = grid_t(best_index, samples);
  return ClampNoSolution<Point>{traj(t, start, finish), t,
                                dist[static_cast<std::size_t>(best_index)]};
}

template <typename Point, typename Trajectory, typename Metric>
ClampOutcome<Point> hypersphere_clamp(const Point& sensed, const Point& start,
                                      const Point& finish, Trajectory&& traj,
                                      Metric&& metric, int samples,
                                      ScanPolicy policy) {
  if (policy == ScanPolicy::kParallel) {
    return hypersphere_clamp_parallel(sensed, start, finish, traj, metric,
                                      samples);
  }
  return hypersphere_clamp(sensed, start, finish, traj, metric, samples);
}

/// ||(x1 - x2) / delta_e||_2 with element-wise division.
inline double weighted_euclidean(std::span<const double> x1,
                                 std::span<const double> x2,
                                 std::span<const double> delta_e) {
  if (x1.size() != x2.size() || x1.size() != delta_e.size()) {
    throw std::invalid_argument("weighted_euclidean: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    if (!(delta_e[i] > 0.0)) {
      throw std::invalid_argument("weighted_euclidean: delta_e[" +
                                  std::to_string(i) + "] must be > 0");
    }
    const double q = (x1[i] - x2[i]) / delta_e[i];
    sum += q * q;
  }
  return std::sqrt(sum);
}

/// Weighted Euclidean metric with the scale vector fixed at construction.
class WeightedEuclidean {
 public:
  explicit WeightedEuclidean(std::vector<double> delta_e)
      : delta_e_(std::move(delta_e)) {
    for (std::size_t i = 0; i < delta_e_.size(); ++i) {
      if (!(delta_e_[i] > 0.0)) {
        throw std::invalid_argument("WeightedEuclidean: delta_e[" +
                                    std::to_string(i) + "] must be > 0");
      }
    }
  }

  double operator()(std::span<const double> a, std::span<const double> b) const {
    return weighted_euclidean(a, b, delta_e_);
  }

  std::size_t dimension() const { return delta_e_.size(); }

 private:
  std::vector<double> delta_e_;
};

/// Straight-line trajectory on real vectors, endpoint-exact.
struct VectorLerp {
  std::vector<double> operator()(double t, const std::vector<double>& s,
                                 const std::vector<double>& f) const {
    if (t == 0.0) return s;
    if (t == 1.0) return f;
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      out[i] = (1.0 - t) * s[i] + t * f[i];
    }
    return out;
  }
};

/// Scalar LERP, endpoint-exact.
struct ScalarLerp {
  double operator()(double t, double s, double f) const {
    if (t == 0.0) return s;
    if (t == 1.0) return f;
    return (1.0 - t) * s + t * f;
  }
};

}  // namespace sphereclamp

#endif
