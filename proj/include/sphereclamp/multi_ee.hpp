#ifndef SPHERECLAMP_MULTI_EE_HPP
#define SPHERECLAMP_MULTI_EE_HPP

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sphereclamp/se3.hpp"

namespace sphereclamp {

/**
 * Ordered stack of end-effector poses, each tagged with a limb name. The name
 * list is shared between copies so interpolated points stay cheap.
 */
class MultiPose {
 public:
  MultiPose(std::vector<std::string> ids, std::vector<Pose> poses);

  std::size_t size() const { return poses_.size(); }
  const std::vector<std::string>& ids() const { return *ids_; }
  const std::string& id(std::size_t i) const { return (*ids_)[i]; }
  const std::vector<Pose>& poses() const { return poses_; }
  const Pose& pose(std::size_t i) const { return poses_[i]; }
  Pose& pose(std::size_t i) { return poses_[i]; }

  /// Index of the limb called `name`, or -1.
  int index_of(const std::string& name) const;

  /// Same ids in the same order.
  bool same_layout(const MultiPose& other) const;

  /// Copy with new poses and the same ids.
  MultiPose with_poses(std::vector<Pose> poses) const;

  bool operator==(const MultiPose& other) const {
    return same_layout(other) && poses_ == other.poses_;
  }

 private:
  MultiPose(std::shared_ptr<const std::vector<std::string>> ids, std::vector<Pose> poses);

  std::shared_ptr<const std::vector<std::string>> ids_;
  std::vector<Pose> poses_;
};

struct MultiMetricParams {
  std::vector<Se3MetricParams> per_ee;
  /// k of the outer k-norm; +infinity selects the maximum.
  double norm_order = std::numeric_limits<double>::infinity();

  static MultiMetricParams uniform(std::size_t n, const Se3MetricParams& p,
                                   double norm_order = std::numeric_limits<double>::infinity());
  void validate() const;
};

/// Every end-effector interpolated at the same t.
MultiPose stacked_interp(double t, const MultiPose& start, const MultiPose& finish);

std::vector<double> per_ee_distances(const MultiPose& x, const MultiPose& y,
                                     const MultiMetricParams& params);

/// k-norm of the per end-effector SE(3) distances.
double stacked_distance(const MultiPose& x, const MultiPose& y, const MultiMetricParams& params);

/// k-norm of an arbitrary nonnegative vector (k >= 1 or +inf).
double k_norm(const std::vector<double>& values, double k);

struct StackedInterp {
  MultiPose operator()(double t, const MultiPose& s, const MultiPose& f) const {
    return stacked_interp(t, s, f);
  }
};

class StackedMetric {
 public:
  explicit StackedMetric(MultiMetricParams params) : params_(std::move(params)) { params_.validate(); }
  double operator()(const MultiPose& a, const MultiPose& b) const {
    return stacked_distance(a, b, params_);
  }
  const MultiMetricParams& params() const { return params_; }

 private:
  MultiMetricParams params_;
};

}  // namespace sphereclamp

#endif
