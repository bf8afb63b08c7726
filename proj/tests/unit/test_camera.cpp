#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "viki/camera.hpp"

using namespace viki;

namespace {

CameraIntrinsics k600() {
  CameraIntrinsics K;
  K.fu = K.fv = 600.0;
  return K;
}

}  // namespace

TEST(Project, OpticalAxis) {
  EXPECT_EQ(project(Vec3(0, 0, 2), k600()), (PixelPoint{640, 360}));
}

TEST(Project, LateralOffset) {
  EXPECT_EQ(project(Vec3(0.5, 0, 2), k600()), (PixelPoint{790, 360}));
}

TEST(Project, BehindCamera) {
  EXPECT_VIKI_ERROR(project(Vec3(0, 0, -1), k600()), ErrorCode::BehindCamera);
  EXPECT_VIKI_ERROR(project(Vec3(1, 0, 0), k600()), ErrorCode::BehindCamera);
}

TEST(Project, BackProjectionRoundTrip) {
  const CameraIntrinsics K;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> xy(-3.0, 3.0);
  std::uniform_real_distribution<double> z(0.5, 20.0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 P(xy(rng), xy(rng), z(rng));
    const Vec3 back = back_project_ray(project(P, K), K) * P.z();
    EXPECT_LT((back - P).norm(), 1e-9);
  }
}

TEST(InteractionRow, CenteredFeature) {
  InteractionRow expected;
  expected << -1, 0, 0, 0, -1, 0, 0, -1, 0, 1, 0, 0;
  EXPECT_EQ(interaction_row({0, 0}, 1.0, 1.0), expected);
}

TEST(InteractionRow, DepthScalesTranslationalBlockOnly) {
  const InteractionRow a = interaction_row({12.0, -40.0}, 1.5, 920.0);
  const InteractionRow b = interaction_row({12.0, -40.0}, 3.0, 920.0);
  EXPECT_LT((b.leftCols<3>() - 0.5 * a.leftCols<3>()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(b.rightCols<3>(), a.rightCols<3>());
}

TEST(InteractionRow, NonPositiveDepth) {
  EXPECT_VIKI_ERROR(interaction_row({0, 0}, 0.0, 1.0), ErrorCode::NonPositiveDepth);
  EXPECT_VIKI_ERROR(interaction_row({0, 0}, -2.0, 1.0), ErrorCode::NonPositiveDepth);
}

TEST(InteractionMatrix, StacksRowsRelativeToPrincipalPoint) {
  const CameraIntrinsics K;
  const std::vector<PixelPoint> f{{600, 300}, {600, 420}, {700, 420}, {700, 300}};
  const Eigen::MatrixXd L = interaction_matrix(f, 3.0, K);
  ASSERT_EQ(L.rows(), 8);
  ASSERT_EQ(L.cols(), 6);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const InteractionRow row = interaction_row({f[i].u - K.cu, f[i].v - K.cv}, 3.0, K.fu);
    EXPECT_EQ(L.middleRows<2>(static_cast<Eigen::Index>(2 * i)), row);
  }
}

TEST(InteractionMatrix, RowCountScalesWithFeatures) {
  const CameraIntrinsics K;
  std::vector<PixelPoint> f{{600, 300}, {610, 420}, {700, 410}, {705, 300}, {650, 350}};
  EXPECT_EQ(interaction_matrix(f, 2.0, K).rows(), 10);
}

TEST(InteractionMatrix, DegenerateInputs) {
  const CameraIntrinsics K;
  const std::vector<PixelPoint> same(4, PixelPoint{700, 400});
  EXPECT_VIKI_ERROR(interaction_matrix(same, 2.0, K), ErrorCode::DegenerateFeatures);
  const std::vector<PixelPoint> two{{1, 2}, {3, 4}};
  EXPECT_VIKI_ERROR(interaction_matrix(two, 2.0, K), ErrorCode::DegenerateFeatures);
}

// First-order check: the pixel motion of a static point under a small camera
// twist agrees with the interaction row.
TEST(InteractionRow, FiniteDifference) {
  const CameraIntrinsics K;
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> xy(-1.5, 1.5);
  std::uniform_real_distribution<double> z(0.5, 8.0);
  std::normal_distribution<double> g(0.0, 1.0);
  int checked = 0;
  while (checked < 300) {
    const Vec3 P(xy(rng), xy(rng), z(rng));
    Vec6 xi;
    for (int k = 0; k < 6; ++k) xi(k) = g(rng);
    xi *= 1e-4 / xi.norm();
    const PixelPoint p0 = project(P, K);
    const PixelPoint p1 = oracle::moved_pixel(P, xi, 1.0, K);
    const Eigen::Vector2d fd(p1.u - p0.u, p1.v - p0.v);
    const Eigen::Vector2d an = interaction_row({p0.u - K.cu, p0.v - K.cv}, P.z(), K.fu) * xi;
    if (an.norm() < 1e-9) continue;
    EXPECT_LT((fd - an).norm() / an.norm(), 1e-2);
    ++checked;
  }
}

TEST(OpticalMount, ForwardLevelCamera) {
  const Mat3 R = optical_mount_rotation(0.0, 0.0);
  EXPECT_TRUE((RigidTransform{R, Vec3::Zero()}).is_valid());
  // optical z along robot x, optical x along robot -y, optical y along robot -z
  EXPECT_LT((R.col(2) - Vec3::UnitX()).norm(), 1e-15);
  EXPECT_LT((R.col(0) + Vec3::UnitY()).norm(), 1e-15);
  EXPECT_LT((R.col(1) + Vec3::UnitZ()).norm(), 1e-15);
}

TEST(OpticalMount, PitchTiltsDown) {
  const Mat3 R = optical_mount_rotation(0.0, 0.3);
  EXPECT_LT(R.col(2).z(), 0.0);
  EXPECT_TRUE((RigidTransform{R, Vec3::Zero()}).is_valid());
}

TEST(Intrinsics, SquarePixels) {
  CameraIntrinsics K;
  EXPECT_TRUE(K.square_pixels());
  K.fv = 921.0;
  EXPECT_FALSE(K.square_pixels());
}
