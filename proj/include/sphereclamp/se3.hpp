#ifndef SPHERECLAMP_SE3_HPP
#define SPHERECLAMP_SE3_HPP

#include <limits>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sphereclamp {

/// Unit quaternion. Renormalized on every construction; q and -q are the same
/// rotation.
class Rotation {
 public:
  Rotation() : q_(Eigen::Quaterniond::Identity()) {}
  Rotation(double w, double x, double y, double z);
  explicit Rotation(const Eigen::Quaterniond& q);

  static Rotation identity() { return Rotation(); }
  static Rotation from_axis_angle(const Eigen::Vector3d& axis, double angle);
  static Rotation rot_x(double angle);
  static Rotation rot_y(double angle);
  static Rotation rot_z(double angle);

  const Eigen::Quaterniond& quaternion() const { return q_; }
  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  Rotation inverse() const;
  Rotation negated() const;
  Rotation operator*(const Rotation& rhs) const;

  /// Equal as rotations (up to quaternion sign), component tolerance `tol`.
  bool same_rotation(const Rotation& other, double tol = 1e-12) const;

  /// Bitwise-equal quaternion coefficients.
  bool operator==(const Rotation& other) const { return q_.coeffs() == other.q_.coeffs(); }

 private:
  Eigen::Quaterniond q_;
};

/// Rigid pose: translation in millimeters plus a rotation.
struct Pose {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Rotation rotation;

  Pose() = default;
  Pose(const Eigen::Vector3d& translation, const Rotation& r = Rotation());

  bool operator==(const Pose& other) const {
    return v == other.v && rotation == other.rotation;
  }
};

/// Allowed errors scaling the SE(3) metric. r_e may be +infinity, in which
/// case rotation is ignored.
struct Se3MetricParams {
  double p_e = 1.0;  ///< millimeters
  double r_e = std::numeric_limits<double>::infinity();  ///< radians

  void validate() const;
};

/// Geodesic interpolation along the shorter arc, constant angular velocity.
///
/// When the endpoints are half a turn apart both arcs are equally short; the
/// relative rotation axis is then oriented so that its largest-magnitude
/// component is positive, which makes the choice independent of quaternion
/// sign.
Rotation slerp(const Rotation& from, const Rotation& to, double t);

/// LERP on translation, SLERP on rotation. Returns the endpoints themselves at
/// t = 0 and t = 1.
Pose se3_interp(double t, const Pose& start, const Pose& finish);

/// Rotation angle in [0, pi].
double rotation_angle(const Rotation& r);

/// || [(v_b - v_a) / p_e ; angle(R_a^-1 R_b) / r_e] ||_2
double se3_distance(const Pose& a, const Pose& b, const Se3MetricParams& params);

/// se3_distance bound to fixed parameters.
class Se3Metric {
 public:
  explicit Se3Metric(const Se3MetricParams& params) : params_(params) { params_.validate(); }
  double operator()(const Pose& a, const Pose& b) const { return se3_distance(a, b, params_); }
  const Se3MetricParams& params() const { return params_; }

 private:
  Se3MetricParams params_;
};

struct Se3Interp {
  Pose operator()(double t, const Pose& s, const Pose& f) const { return se3_interp(t, s, f); }
};

}  // namespace sphereclamp

#endif
