#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "viki/hybrid.hpp"

using namespace viki;

namespace {

Eigen::VectorXd uniform_err(double value) { return Eigen::VectorXd::Constant(8, value); }

}  // namespace

TEST(HybridLaw, DetectionSelectsVisualServo) {
  const Twist2 t = hybrid_law(true, {0.3, 0.1}, Twist2{0.5, 0.0});
  EXPECT_EQ(t, (Twist2{0.3, 0.1}));
  EXPECT_EQ(hybrid_law(true, {0.3, 0.1}, std::nullopt), (Twist2{0.3, 0.1}));
}

TEST(HybridLaw, NoDetectionSelectsKinematic) {
  EXPECT_EQ(hybrid_law(false, {-7.0, 3.0}, Twist2{0.5, 0.0}), (Twist2{0.5, 0.0}));
}

TEST(HybridLaw, NoTargetYet) {
  EXPECT_VIKI_ERROR(hybrid_law(false, {0.3, 0.1}, std::nullopt), ErrorCode::NoTargetYet);
}

TEST(HybridLaw, GateIsExclusive) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Twist2 vs{u(rng), u(rng)};
    const Twist2 kin{u(rng), u(rng)};
    const bool c = i % 2 == 0;
    EXPECT_EQ(hybrid_law(c, vs, kin), c ? vs : kin);
  }
}

TEST(Smooth, FixedPoint) { EXPECT_EQ(smooth({0.2, 0.1}, {0.2, 0.1}), (Twist2{0.2, 0.1})); }

TEST(Smooth, HandEvaluated) {
  const Twist2 t = smooth({0.5, 0.0}, {0.4, 0.0});
  EXPECT_NEAR(t.velocity, 0.45, 1e-15);
  EXPECT_EQ(t.yaw_rate, 0.0);
}

TEST(Smooth, ZeroAbsorbs) {
  EXPECT_EQ(smooth({0.0, 0.0}, {0.37, -0.2}), (Twist2{0.0, 0.0}));
}

TEST(Smooth, MatchesOracle) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 500; ++i) {
    const Twist2 a{u(rng), u(rng)};
    const Twist2 b{u(rng), u(rng)};
    EXPECT_EQ(smooth(a, b), oracle::smooth(a, b));
  }
}

TEST(Smooth, FixedPointsOnlyWhereInputsAgree) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.05, 0.6);
  for (int i = 0; i < 100; ++i) {
    const Twist2 a{u(rng), u(rng)};
    const Twist2 b{a.velocity + 0.01, a.yaw_rate - 0.02};
    const Twist2 s = smooth(a, b);
    EXPECT_NE(s.velocity, a.velocity);
    EXPECT_NE(s.yaw_rate, a.yaw_rate);
  }
}

TEST(UpdateTarget, ForwardLookingCamera) {
  // Optical axis along world x, camera at the origin.
  const RigidTransform world_T_camera{optical_mount_rotation(0.0, 0.0), Vec3::Zero()};
  const TargetPoint t = update_target({Vec3(0, 0, 2)}, world_T_camera);
  EXPECT_NEAR(t.position.x(), 2.0, 1e-15);
  EXPECT_NEAR(t.position.y(), 0.0, 1e-15);
}

TEST(UpdateTarget, MountedAndMovedCamera) {
  const RigidTransform world_T_camera =
      planar_pose({1.0, 2.0, std::numbers::pi / 2}) * RigidTransform{optical_mount_rotation(0.0, 0.3), Vec3(0.5, 0, 1)};
  const Vec3 world(1.2, 5.0, 0.2);
  const Vec3 in_camera = world_T_camera.inverse() * world;
  const TargetPoint t = update_target({in_camera}, world_T_camera);
  EXPECT_LT((t.position - world.head<2>()).norm(), 1e-12);
}

TEST(TargetMemory, OverwriteSemantics) {
  TargetMemory m;
  EXPECT_FALSE(m.has_target());
  const RigidTransform T{optical_mount_rotation(0.0, 0.0), Vec3::Zero()};
  m.remember({Vec3(0, 0, 2)}, T);
  m.remember({Vec3(0, 0, 2)}, T);
  ASSERT_TRUE(m.has_target());
  EXPECT_NEAR(m.target()->position.x(), 2.0, 1e-15);
  m.remember({Vec3(0, 0, 3)}, T);
  EXPECT_NEAR(m.target()->position.x(), 3.0, 1e-15);
}

TEST(PlacementStep, Examples) {
  const SwitchThresholds th;
  EXPECT_EQ(placement_step({Stage::Forward, 0}, uniform_err(1.5), Vec2::Zero(), th, 5).stage, Stage::Rotate);
  EXPECT_EQ(placement_step({Stage::Rotate, 0}, uniform_err(0.0), Vec2(0.005, -0.009), th, 5).stage, Stage::Backward);
  EXPECT_EQ(placement_step({Stage::Forward, 0}, uniform_err(3.0), Vec2::Zero(), th, 5).stage, Stage::Forward);
}

TEST(PlacementStep, RecordsEntryTick) {
  const PlacementState s = placement_step({Stage::Forward, 0}, uniform_err(0.1), Vec2::Zero(), SwitchThresholds{}, 42);
  EXPECT_EQ(s.entered_at, 42);
  const PlacementState same = placement_step(s, uniform_err(9.0), Vec2(1.0, 1.0), SwitchThresholds{}, 43);
  EXPECT_EQ(same.entered_at, 42);
}

TEST(PlacementStep, FeatureBoundStraddle) {
  const SwitchThresholds th;
  for (Stage from : {Stage::Forward, Stage::Backward}) {
    const Stage to = from == Stage::Forward ? Stage::Rotate : Stage::Done;
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXd e = uniform_err(0.0);
      for (double mag : {1.999999, 2.0, 2.000001}) {
        for (double sign : {1.0, -1.0}) {
          e(k) = sign * mag;
          const Stage got = placement_step({from, 0}, e, Vec2::Zero(), th, 1).stage;
          EXPECT_EQ(got, mag < 2.0 ? to : from) << "component " << k << " value " << e(k);
        }
      }
    }
  }
}

TEST(PlacementStep, PositionBoundStraddle) {
  const SwitchThresholds th;
  for (int k = 0; k < 2; ++k) {
    for (double mag : {0.0099999, 0.01, 0.0100001}) {
      for (double sign : {1.0, -1.0}) {
        Vec2 e = Vec2::Zero();
        e(k) = sign * mag;
        const Stage got = placement_step({Stage::Rotate, 0}, uniform_err(50.0), e, th, 1).stage;
        EXPECT_EQ(got, mag < 0.01 ? Stage::Backward : Stage::Rotate);
      }
    }
  }
}

TEST(PlacementStep, NeverRegressesOrSkips) {
  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> f(-4.0, 4.0);
  std::uniform_real_distribution<double> h(-0.02, 0.02);
  for (int run = 0; run < 50; ++run) {
    PlacementState s;
    for (long tick = 0; tick < 200; ++tick) {
      Eigen::VectorXd e(8);
      for (int k = 0; k < 8; ++k) e(k) = f(rng) * 0.6;
      const PlacementState next = placement_step(s, e, Vec2(h(rng), h(rng)), SwitchThresholds{}, tick);
      const int delta = static_cast<int>(next.stage) - static_cast<int>(s.stage);
      EXPECT_TRUE(delta == 0 || delta == 1);
      s = next;
    }
  }
}

TEST(PlacementStep, EmptyErrorNeverFires) {
  EXPECT_EQ(placement_step({Stage::Forward, 0}, Eigen::VectorXd(), Vec2::Zero(), SwitchThresholds{}, 1).stage,
            Stage::Forward);
}

TEST(Stage, Names) {
  EXPECT_EQ(to_string(Stage::Forward), "forward");
  EXPECT_EQ(to_string(Stage::Done), "done");
  EXPECT_EQ(static_cast<int>(Stage::Backward), 3);
}
