#include "sphereclamp/se3.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "sphereclamp/oracles.hpp"

namespace sphereclamp {
namespace {

constexpr double kPi = std::numbers::pi;

Rotation random_rotation(std::mt19937_64& rng) {
  return Rotation(oracles::random_quaternion(rng));
}

// Geodesic angle between two rotations computed through Eigen only.
double eigen_angle_between(const Rotation& a, const Rotation& b) {
  return a.quaternion().angularDistance(b.quaternion());
}

TEST(Rotation, NormalizesAndRejectsDegenerate) {
  const Rotation r(2.0, 0.0, 0.0, 0.0);
  EXPECT_EQ(r, Rotation::identity());
  EXPECT_THROW(Rotation(0.0, 0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(Rotation(std::nan(""), 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(Rotation, SameRotationIgnoresSign) {
  const Rotation r = Rotation::rot_y(0.3);
  EXPECT_TRUE(r.same_rotation(r.negated()));
  EXPECT_FALSE(r == r.negated());
  EXPECT_FALSE(r.same_rotation(Rotation::rot_y(0.31)));
}

TEST(Pose, RejectsNonFiniteTranslation) {
  EXPECT_THROW(Pose(Eigen::Vector3d(0.0, std::numeric_limits<double>::infinity(), 0.0)),
               std::invalid_argument);
}

TEST(Slerp, QuarterTurnMidpoint) {
  const Rotation mid = slerp(Rotation::identity(), Rotation::rot_z(kPi / 2), 0.5);
  EXPECT_TRUE(mid.same_rotation(Rotation::rot_z(kPi / 4), 1e-15));
}

TEST(Slerp, EndpointsAreExact) {
  const Rotation a = Rotation::rot_x(0.4) * Rotation::rot_z(-1.1);
  const Rotation b = Rotation::rot_y(2.9);
  EXPECT_EQ(slerp(a, b, 0.0), a);
  EXPECT_EQ(slerp(a, b, 1.0), b);
}

TEST(Slerp, TakesShorterArc) {
  // rot_z(3pi/2) is rot_z(-pi/2) the short way round.
  const Rotation mid = slerp(Rotation::identity(), Rotation::rot_z(1.5 * kPi), 0.5);
  EXPECT_TRUE(mid.same_rotation(Rotation::rot_z(-kPi / 4), 1e-14));
}

TEST(Slerp, HalfTurnIsDeterministicAndSignInvariant) {
  const Rotation half = Rotation::rot_x(kPi);
  const Rotation m1 = slerp(Rotation::identity(), half, 0.5);
  const Rotation m2 = slerp(Rotation::identity(), half.negated(), 0.5);
  EXPECT_TRUE(m1.same_rotation(m2, 1e-15));
  EXPECT_NEAR(rotation_angle(Rotation::identity().inverse() * m1), kPi / 2, 1e-12);
  // Stays on one of the two half-turn arcs about x.
  EXPECT_TRUE(m1.same_rotation(Rotation::rot_x(kPi / 2), 1e-12) ||
              m1.same_rotation(Rotation::rot_x(-kPi / 2), 1e-12));
}

TEST(Slerp, IdenticalEndpoints) {
  const Rotation a = Rotation::rot_y(0.7);
  EXPECT_TRUE(slerp(a, a, 0.37).same_rotation(a, 1e-15));
  EXPECT_TRUE(slerp(a, a.negated(), 0.37).same_rotation(a, 1e-15));
}

TEST(SlerpProperty, MatchesAxisAngleGeodesic) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const Rotation a = random_rotation(rng);
    const Rotation b = random_rotation(rng);
    const double t = unit(rng);
    Eigen::Quaterniond rel = a.quaternion().conjugate() * b.quaternion();
    if (rel.w() < 0) rel.coeffs() = -rel.coeffs();
    const Eigen::AngleAxisd aa(rel);
    const Rotation expected(a.quaternion() *
                            Eigen::Quaterniond(Eigen::AngleAxisd(t * aa.angle(), aa.axis())));
    ASSERT_LE(eigen_angle_between(slerp(a, b, t), expected), 1e-9);
  }
}

TEST(SlerpProperty, ConstantAngularVelocity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 0.9);
  for (int i = 0; i < 2000; ++i) {
    const Rotation a = random_rotation(rng);
    const Rotation b = random_rotation(rng);
    const double total = eigen_angle_between(a, b);
    const double t = unit(rng);
    const double h = 0.05;
    const double step = eigen_angle_between(slerp(a, b, t), slerp(a, b, t + h));
    ASSERT_NEAR(step, total * h, 1e-8);
    ASSERT_NEAR(eigen_angle_between(a, slerp(a, b, t)), total * t, 1e-8);
  }
}

TEST(RotationAngle, Examples) {
  EXPECT_EQ(rotation_angle(Rotation::identity()), 0.0);
  EXPECT_NEAR(rotation_angle(Rotation::rot_x(kPi / 2)), kPi / 2, 1e-15);
  // w = cos(0.7) encodes a 1.4 rad rotation.
  EXPECT_NEAR(rotation_angle(Rotation(std::cos(0.7), std::sin(0.7), 0.0, 0.0)), 1.4, 1e-15);
  EXPECT_NEAR(rotation_angle(Rotation::rot_z(kPi)), kPi, 1e-15);
  // Range stays within [0, pi] for large input angles.
  EXPECT_NEAR(rotation_angle(Rotation::rot_y(1.5 * kPi)), 0.5 * kPi, 1e-14);
}

TEST(Se3Distance, Examples) {
  const Pose origin;
  const Se3MetricParams p{10.0, kPi / 2};
  EXPECT_EQ(se3_distance(origin, origin, p), 0.0);
  EXPECT_DOUBLE_EQ(se3_distance(origin, Pose(Eigen::Vector3d(10, 0, 0)), p), 1.0);
  EXPECT_DOUBLE_EQ(se3_distance(origin, Pose(Eigen::Vector3d(0, 0, 0), Rotation::rot_z(kPi / 2)), p),
                   1.0);
  EXPECT_NEAR(se3_distance(origin, Pose(Eigen::Vector3d(0, 10, 0), Rotation::rot_x(kPi / 2)), p),
              std::sqrt(2.0), 1e-15);
}

TEST(Se3Distance, InfiniteRotationAllowanceIgnoresRotation) {
  const Se3MetricParams p{5.0, std::numeric_limits<double>::infinity()};
  const Pose rotated(Eigen::Vector3d::Zero(), Rotation::rot_z(kPi / 2));
  EXPECT_EQ(se3_distance(Pose(), rotated, p), 0.0);
  EXPECT_DOUBLE_EQ(se3_distance(Pose(), Pose(Eigen::Vector3d(3, 4, 0), Rotation::rot_x(1.0)), p),
                   1.0);
}

TEST(Se3Distance, RejectsBadParams) {
  EXPECT_THROW((Se3MetricParams{0.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((Se3MetricParams{1.0, -1.0}.validate()), std::invalid_argument);
  EXPECT_THROW(Se3Metric(Se3MetricParams{std::nan(""), 1.0}), std::invalid_argument);
}

TEST(Se3DistanceProperty, MetricAxioms) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  const Se3MetricParams p{7.0, 0.4};
  const auto pose = [&] {
    return Pose(Eigen::Vector3d(u(rng), u(rng), u(rng)), random_rotation(rng));
  };
  for (int i = 0; i < 10000; ++i) {
    const Pose a = pose(), b = pose(), c = pose();
    const double ab = se3_distance(a, b, p);
    ASSERT_GE(ab, 0.0);
    ASSERT_EQ(se3_distance(a, a, p), 0.0);
    ASSERT_NEAR(ab, se3_distance(b, a, p), 1e-9);
    ASSERT_LE(se3_distance(a, c, p), ab + se3_distance(b, c, p) + 1e-9);
  }
}

TEST(Se3Interp, EndpointsAndMidpoint) {
  const Pose s(Eigen::Vector3d(0, 0, 0), Rotation::identity());
  const Pose f(Eigen::Vector3d(10, -20, 4), Rotation::rot_z(kPi / 2));
  EXPECT_EQ(se3_interp(0.0, s, f), s);
  EXPECT_EQ(se3_interp(1.0, s, f), f);
  const Pose mid = se3_interp(0.5, s, f);
  EXPECT_TRUE(mid.v.isApprox(Eigen::Vector3d(5, -10, 2), 1e-15));
  EXPECT_TRUE(mid.rotation.same_rotation(Rotation::rot_z(kPi / 4), 1e-15));
}

}  // namespace
}  // namespace sphereclamp
