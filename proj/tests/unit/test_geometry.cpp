#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "viki/geometry.hpp"

using namespace viki;

TEST(TransformPoint, Identity) {
  EXPECT_EQ(transform_point(RigidTransform::identity(), Vec3(1, 2, 3)), Vec3(1, 2, 3));
}

TEST(TransformPoint, PureTranslation) {
  EXPECT_EQ(transform_point(RigidTransform::from_translation(Vec3(0, 0, 5)), Vec3(1, 2, 3)), Vec3(1, 2, 8));
}

TEST(TransformPoint, QuarterTurnAboutZ) {
  const Vec3 p = transform_point({rot_z(std::numbers::pi / 2), Vec3::Zero()}, Vec3(1, 0, 0));
  EXPECT_NEAR(p.x(), 0.0, 1e-15);
  EXPECT_NEAR(p.y(), 1.0, 1e-15);
  EXPECT_NEAR(p.z(), 0.0, 1e-15);
}

TEST(TransformPoint, InverseRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const RigidTransform T = oracle::random_transform(rng);
    const Vec3 p(u(rng), u(rng), u(rng));
    EXPECT_LT((transform_point(T.inverse(), transform_point(T, p)) - p).norm(), 1e-9);
  }
}

TEST(RigidTransform, ValidityAndAssociativity) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const RigidTransform a = oracle::random_transform(rng);
    const RigidTransform b = oracle::random_transform(rng);
    const RigidTransform c = oracle::random_transform(rng);
    EXPECT_TRUE(a.is_valid());
    const RigidTransform l = (a * b) * c;
    const RigidTransform r = a * (b * c);
    EXPECT_LT((l.rotation - r.rotation).norm(), 1e-9);
    EXPECT_LT((l.translation - r.translation).norm(), 1e-9);
  }
  RigidTransform bad;
  bad.rotation(0, 0) = 2.0;
  EXPECT_FALSE(bad.is_valid());
  bad.rotation = -Mat3::Identity();
  EXPECT_FALSE(bad.is_valid());
}

TEST(Skew, ZeroVector) { EXPECT_EQ(skew(Vec3::Zero()), Mat3::Zero()); }

TEST(Skew, Definition) {
  Mat3 expected;
  expected << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  EXPECT_EQ(skew(Vec3(1, 2, 3)), expected);
}

TEST(Skew, AntisymmetricAndAnnihilatesItsVector) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 t(u(rng), u(rng), u(rng));
    EXPECT_EQ(skew(t) + skew(t).transpose(), Mat3::Zero());
    EXPECT_LT((skew(t) * t).norm(), 1e-12);
    const Vec3 w(u(rng), u(rng), u(rng));
    EXPECT_LT((skew(t) * w - t.cross(w)).norm(), 1e-12);
  }
}

TEST(VelocityAdjoint, IdentityTransform) {
  EXPECT_EQ(velocity_adjoint(RigidTransform::identity()).matrix, Mat6::Identity());
}

TEST(VelocityAdjoint, ZeroTranslationIsBlockDiagonal) {
  const Mat3 R = rot_x(0.3) * rot_y(-1.1);
  const Mat6 A = velocity_adjoint({R, Vec3::Zero()}).matrix;
  EXPECT_TRUE((A.topLeftCorner<3, 3>() == R));
  EXPECT_TRUE((A.bottomRightCorner<3, 3>() == R));
  EXPECT_TRUE((A.topRightCorner<3, 3>() == Mat3::Zero()));
  EXPECT_TRUE((A.bottomLeftCorner<3, 3>() == Mat3::Zero()));
}

// skew(t) w = t x w = (1,0,0) x (0,0,1) = (0,-1,0).
TEST(VelocityAdjoint, LeverArmCoupling) {
  Vec6 twist;
  twist << 0, 0, 0, 0, 0, 1;
  Vec6 expected;
  expected << 0, -1, 0, 0, 0, 1;
  EXPECT_EQ(velocity_adjoint(RigidTransform::from_translation(Vec3(1, 0, 0))) * twist, expected);
}

TEST(VelocityAdjoint, BlockStructure) {
  std::mt19937_64 rng(14);
  const RigidTransform T = oracle::random_transform(rng);
  const Mat6 A = velocity_adjoint(T).matrix;
  EXPECT_TRUE((A.topRightCorner<3, 3>() == skew(T.translation) * T.rotation));
  EXPECT_TRUE((A.bottomLeftCorner<3, 3>() == Mat3::Zero()));
}

TEST(VelocityAdjoint, CompositionIsHomomorphism) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 200; ++i) {
    const RigidTransform a = oracle::random_transform(rng);
    const RigidTransform b = oracle::random_transform(rng);
    const Mat6 lhs = velocity_adjoint(a * b).matrix;
    const Mat6 rhs = velocity_adjoint(a).matrix * velocity_adjoint(b).matrix;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

// The adjoint must agree with rigid-body kinematics: the velocity of the
// origin of frame b, seen in a, is R v + w_a x t.
TEST(VelocityAdjoint, MatchesRigidBodyKinematics) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const RigidTransform T = oracle::random_transform(rng);
    const Vec3 v(u(rng), u(rng), u(rng));
    const Vec3 w(u(rng), u(rng), u(rng));
    Vec6 twist;
    twist << v, w;
    const Vec6 mapped = velocity_adjoint(T) * twist;
    const Vec3 w_a = T.rotation * w;
    EXPECT_LT((mapped.tail<3>() - w_a).norm(), 1e-12);
    EXPECT_LT((mapped.head<3>() - (T.rotation * v + T.translation.cross(w_a))).norm(), 1e-12);
  }
}

TEST(NormalizeAngle, Range) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize_angle(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(normalize_angle(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(normalize_angle(3.0 * std::numbers::pi / 2.0), -std::numbers::pi / 2.0, 1e-12);
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double n = normalize_angle(a);
    EXPECT_GT(n, -std::numbers::pi);
    EXPECT_LE(n, std::numbers::pi);
    EXPECT_NEAR(std::sin(n), std::sin(a), 1e-12);
    EXPECT_NEAR(std::cos(n), std::cos(a), 1e-12);
  }
}
