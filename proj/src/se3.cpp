#include "sphereclamp/se3.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sphereclamp {
namespace {

// |w| of the relative quaternion below this means the endpoints are half a
// turn apart and both arcs have the same length.
constexpr double kHalfTurnTolerance = 1e-12;

Eigen::Quaterniond normalized_or_throw(const Eigen::Quaterniond& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("Rotation: quaternion must be finite and nonzero");
  }
  // Already unit to rounding: keep the bits so stored poses reload exactly.
  if (std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) return q;
  return Eigen::Quaterniond(q.coeffs() / n);
}

}  // namespace

Rotation::Rotation(double w, double x, double y, double z)
    : q_(normalized_or_throw(Eigen::Quaterniond(w, x, y, z))) {}

Rotation::Rotation(const Eigen::Quaterniond& q) : q_(normalized_or_throw(q)) {}

Rotation Rotation::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("Rotation::from_axis_angle: axis must be nonzero");
  }
  const Eigen::Vector3d u = axis / n;
  const double s = std::sin(0.5 * angle);
  return Rotation(std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z());
}

Rotation Rotation::rot_x(double angle) { return from_axis_angle(Eigen::Vector3d::UnitX(), angle); }
Rotation Rotation::rot_y(double angle) { return from_axis_angle(Eigen::Vector3d::UnitY(), angle); }
Rotation Rotation::rot_z(double angle) { return from_axis_angle(Eigen::Vector3d::UnitZ(), angle); }

Rotation Rotation::inverse() const { return Rotation(q_.conjugate()); }

Rotation Rotation::negated() const { return Rotation(Eigen::Quaterniond(-q_.coeffs())); }

Rotation Rotation::operator*(const Rotation& rhs) const { return Rotation(q_ * rhs.q_); }

bool Rotation::same_rotation(const Rotation& other, double tol) const {
  const Eigen::Vector4d a = q_.coeffs();
  const Eigen::Vector4d b = other.q_.coeffs();
  return (a - b).cwiseAbs().maxCoeff() <= tol || (a + b).cwiseAbs().maxCoeff() <= tol;
}

Pose::Pose(const Eigen::Vector3d& translation, const Rotation& r) : v(translation), rotation(r) {
  if (!v.allFinite()) {
    throw std::invalid_argument("Pose: translation must be finite");
  }
}

void Se3MetricParams::validate() const {
  if (!(p_e > 0.0) || !std::isfinite(p_e)) {
    throw std::invalid_argument("Se3MetricParams: p_e must be finite and > 0");
  }
  if (!(r_e > 0.0)) {
    throw std::invalid_argument("Se3MetricParams: r_e must be > 0 (or +inf)");
  }
}

Rotation slerp(const Rotation& from, const Rotation& to, double t) {
  if (t == 0.0) return from;
  if (t == 1.0) return to;

  Eigen::Quaterniond rel = from.quaternion().conjugate() * to.quaternion();
  if (std::abs(rel.w()) <= kHalfTurnTolerance) {
    Eigen::Vector3d::Index k = 0;
    rel.vec().cwiseAbs().maxCoeff(&k);
    if (rel.vec()[k] < 0.0) rel.coeffs() = -rel.coeffs();
  } else if (rel.w() < 0.0) {
    rel.coeffs() = -rel.coeffs();
  }

  const double s = rel.vec().norm();
  if (s == 0.0) return from;
  const double half_angle = std::atan2(s, rel.w());
  const Eigen::Vector3d axis = rel.vec() / s;
  const double h = t * half_angle;
  const double sh = std::sin(h);
  const Eigen::Quaterniond step(std::cos(h), sh * axis.x(), sh * axis.y(), sh * axis.z());
  return Rotation(from.quaternion() * step);
}

Pose se3_interp(double t, const Pose& start, const Pose& finish) {
  if (t == 0.0) return start;
  if (t == 1.0) return finish;
  Pose out;
  out.v = (1.0 - t) * start.v + t * finish.v;
  out.rotation = slerp(start.rotation, finish.rotation, t);
  return out;
}

double rotation_angle(const Rotation& r) {
  // Same value as 2 acos(min(1, |w|)) for a unit quaternion, without the
  // precision loss of acos near identity.
  return 2.0 * std::atan2(r.quaternion().vec().norm(), std::abs(r.w()));
}

double se3_distance(const Pose& a, const Pose& b, const Se3MetricParams& params) {
  const Eigen::Vector3d dv = (b.v - a.v) / params.p_e;
  double sum = dv.squaredNorm();
  if (!std::isinf(params.r_e)) {
    const Eigen::Quaterniond rel = a.rotation.quaternion().conjugate() * b.rotation.quaternion();
    const double theta = 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
    const double r = theta / params.r_e;
    sum += r * r;
  }
  return std::sqrt(sum);
}

}  // namespace sphereclamp
