#include "viki/camera.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "viki/error.hpp"

namespace viki {

namespace {
constexpr double kConditionLimit = 1e12;
}

bool CameraIntrinsics::square_pixels(double tol) const { return std::abs(fu - fv) <= tol; }

PixelPoint project(const Vec3& p, const CameraIntrinsics& K) {
  if (!(p.z() > 0.0)) throw Error(ErrorCode::BehindCamera, "point has non-positive depth");
  return {K.cu + K.fu * p.x() / p.z(), K.cv + K.fv * p.y() / p.z()};
}

Vec3 back_project_ray(const PixelPoint& px, const CameraIntrinsics& K) {
  return {(px.u - K.cu) / K.fu, (px.v - K.cv) / K.fv, 1.0};
}

InteractionRow interaction_row(const PixelPoint& f, double Z, double l) {
  if (!(Z > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "interaction row needs Z > 0");
  const double u = f.u;
  const double v = f.v;
  InteractionRow L;
  L << -l / Z, 0.0, u / Z, u * v / l, -(l + u * u / l), v,
       0.0, -l / Z, v / Z, l + v * v / l, -u * v / l, -u;
  return L;
}

Eigen::MatrixXd interaction_matrix(std::span<const PixelPoint> features, double Z,
                                   const CameraIntrinsics& K) {
  if (features.size() < 3) throw Error(ErrorCode::DegenerateFeatures, "need at least 3 features");
  Eigen::MatrixXd L(2 * features.size(), 6);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const PixelPoint rel{features[i].u - K.cu, features[i].v - K.cv};
    L.middleRows<2>(static_cast<Eigen::Index>(2 * i)) = interaction_row(rel, Z, K.fu);
  }
  // L^T L is 6x6; L L^T is rank deficient by construction for 4 points.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || (smax * smax) > kConditionLimit * (smin * smin)) {
    throw Error(ErrorCode::DegenerateFeatures, "feature stack is rank deficient");
  }
  return L;
}

Mat3 optical_mount_rotation(double yaw, double pitch) {
  const Vec3 forward(std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), -std::sin(pitch));
  const Vec3 right(std::sin(yaw), -std::cos(yaw), 0.0);
  const Vec3 down = forward.cross(right);
  Mat3 R;
  R.col(0) = right;
  R.col(1) = down;
  R.col(2) = forward;
  return R;
}

}  // namespace viki
