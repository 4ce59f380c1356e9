#include "sphereclamp/multi_ee.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sphereclamp {

MultiPose::MultiPose(std::vector<std::string> ids, std::vector<Pose> poses)
    : MultiPose(std::make_shared<const std::vector<std::string>>(std::move(ids)),
                std::move(poses)) {
  if (ids_->empty()) {
    throw std::invalid_argument("MultiPose: needs at least one end-effector");
  }
  if (ids_->size() != poses_.size()) {
    throw std::invalid_argument("MultiPose: " + std::to_string(ids_->size()) + " ids but " +
                                std::to_string(poses_.size()) + " poses");
  }
  std::set<std::string> seen;
  for (const auto& id : *ids_) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("MultiPose: duplicate limb id '" + id + "'");
    }
  }
}

MultiPose::MultiPose(std::shared_ptr<const std::vector<std::string>> ids, std::vector<Pose> poses)
    : ids_(std::move(ids)), poses_(std::move(poses)) {}

int MultiPose::index_of(const std::string& name) const {
  const auto it = std::find(ids_->begin(), ids_->end(), name);
  return it == ids_->end() ? -1 : static_cast<int>(it - ids_->begin());
}

bool MultiPose::same_layout(const MultiPose& other) const {
  return ids_ == other.ids_ || *ids_ == *other.ids_;
}

MultiPose MultiPose::with_poses(std::vector<Pose> poses) const {
  if (poses.size() != poses_.size()) {
    throw std::invalid_argument("MultiPose::with_poses: size mismatch");
  }
  return MultiPose(ids_, std::move(poses));
}

MultiMetricParams MultiMetricParams::uniform(std::size_t n, const Se3MetricParams& p,
                                             double norm_order) {
  return MultiMetricParams{std::vector<Se3MetricParams>(n, p), norm_order};
}

void MultiMetricParams::validate() const {
  if (per_ee.empty()) throw std::invalid_argument("MultiMetricParams: per_ee is empty");
  for (const auto& p : per_ee) p.validate();
  if (!(norm_order >= 1.0)) {
    throw std::invalid_argument("MultiMetricParams: norm_order must be >= 1 or inf");
  }
}

MultiPose stacked_interp(double t, const MultiPose& start, const MultiPose& finish) {
  if (!start.same_layout(finish)) {
    throw std::invalid_argument("stacked_interp: start and finish limb layouts differ");
  }
  if (t == 0.0) return start;
  if (t == 1.0) return finish;
  std::vector<Pose> out;
  out.reserve(start.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    out.push_back(se3_interp(t, start.pose(i), finish.pose(i)));
  }
  return start.with_poses(std::move(out));
}

std::vector<double> per_ee_distances(const MultiPose& x, const MultiPose& y,
                                     const MultiMetricParams& params) {
  if (x.size() != y.size() || x.size() != params.per_ee.size()) {
    throw std::invalid_argument("stacked_distance: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + " poses, " +
                                std::to_string(params.per_ee.size()) + " metric entries");
  }
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = se3_distance(x.pose(i), y.pose(i), params.per_ee[i]);
  }
  return d;
}

double k_norm(const std::vector<double>& values, double k) {
  if (std::isinf(k)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  if (k == 1.0) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  if (k == 2.0) {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : values) s += std::pow(v, k);
  return std::pow(s, 1.0 / k);
}

double stacked_distance(const MultiPose& x, const MultiPose& y, const MultiMetricParams& params) {
  if (x.size() != y.size() || x.size() != params.per_ee.size()) {
    return k_norm(per_ee_distances(x, y, params), params.norm_order);  // throws
  }
  const double k = params.norm_order;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = se3_distance(x.pose(i), y.pose(i), params.per_ee[i]);
    if (std::isinf(k)) {
      acc = std::max(acc, d);
    } else if (k == 1.0) {
      acc += d;
    } else if (k == 2.0) {
      acc += d * d;
    } else {
      acc += std::pow(d, k);
    }
  }
  if (std::isinf(k) || k == 1.0) return acc;
  if (k == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / k);
}

}  // namespace sphereclamp
