#include "viki/visual_servo.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "viki/error.hpp"

namespace viki {

ServoGains ServoGains::from_values(const std::vector<double>& values) {
  if (values.size() != 5 && values.size() != 6) {
    throw Error(ErrorCode::ConfigError, "servo gains need 5 or 6 entries");
  }
  ServoGains g;
  for (int i = 0; i < 6; ++i) {
    const double v = values[std::min<std::size_t>(static_cast<std::size_t>(i), values.size() - 1)];
    if (!(v > 0.0)) throw Error(ErrorCode::ConfigError, "servo gains must be positive");
    g.lambda(i) = v;
  }
  return g;
}

FeatureSet current_features(const BoundingBox& bb) {
  const auto c = bb.corners();
  return {c[0], c[1], c[2], c[3]};
}

double desired_depth(const DesiredPlacement& placement, const DepthImage& depth) {
  const int u = static_cast<int>(std::floor(placement.center.u));
  const int v = static_cast<int>(std::floor(placement.center.v));
  if (u >= 0 && v >= 0 && u < depth.width && v < depth.height) {
    const float d = depth.at(u, v);
    if (d > 0.0f) return d;
  }
  return placement.fallback_depth;
}

FeatureSet desired_features(const BoundingBox& bb, double Z_o, const DesiredPlacement& placement,
                            const DepthImage& depth) {
  if (!(Z_o > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "object depth must be positive");
  const double Z_d = desired_depth(placement, depth);
  if (!(Z_d > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "desired depth must be positive");
  const double k = Z_o / Z_d;
  const double half_w = 0.5 * bb.width() * k;
  const double half_h = 0.5 * bb.height() * k;
  const BoundingBox desired{placement.center.u - half_w, placement.center.v - half_h,
                            placement.center.u + half_w, placement.center.v + half_h};
  return current_features(desired);
}

Eigen::VectorXd feature_error(const FeatureSet& f, const FeatureSet& f_d) {
  Eigen::VectorXd e(2 * f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    e(static_cast<Eigen::Index>(2 * i)) = f[i].u - f_d[i].u;
    e(static_cast<Eigen::Index>(2 * i + 1)) = f[i].v - f_d[i].v;
  }
  return e;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double relative_cutoff) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? relative_cutoff * sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vec6 camera_twist(const FeatureSet& f, const FeatureSet& f_d, double Z_o, const CameraIntrinsics& K,
                  const ServoGains& gains) {
  if (!(Z_o > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "object depth must be positive");
  const Eigen::MatrixXd L = interaction_matrix(f, Z_o, K);
  const Vec6 v = pseudo_inverse(L) * feature_error(f, f_d);
  return -(gains.lambda.asDiagonal() * v);
}

Eigen::Matrix<double, 6, 2> robot_jacobian(RobotJacobianMode mode, double theta, double d) {
  Eigen::Matrix<double, 6, 2> J = Eigen::Matrix<double, 6, 2>::Zero();
  if (mode == RobotJacobianMode::Body) {
    J(0, 0) = 1.0;
    J(5, 1) = 1.0;
  } else {
    J.topRows<2>() = body_jacobian(theta, d);
    J(5, 1) = 1.0;
  }
  return J;
}

Twist2 robot_velocity_vs(const FeatureSet& f, const FeatureSet& f_d, double Z_o, const CameraIntrinsics& K,
                         const ServoGains& gains, const VelocityAdjoint& camera_from_robot, double theta,
                         const VehicleParams& params, RobotJacobianMode mode) {
  if (!(Z_o > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "object depth must be positive");
  const Eigen::MatrixXd L = interaction_matrix(f, Z_o, K);
  const Eigen::MatrixXd A = L * camera_from_robot.matrix * robot_jacobian(mode, theta, params.wheelbase);

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) <= 1e-10 * sv(0)) {
    throw Error(ErrorCode::SingularCombined, "combined image/robot Jacobian is rank deficient");
  }

  // Per-axis camera gains seen through the robot's two degrees of freedom.
  // With a scalar gain this is exactly -lambda pinv(A) e.
  const Eigen::MatrixXd B = camera_from_robot.matrix * robot_jacobian(mode, theta, params.wheelbase);
  const Eigen::Matrix2d G = pseudo_inverse(B) * gains.lambda.asDiagonal() * B;
  const Eigen::Vector2d v = -G * (pseudo_inverse(A) * feature_error(f, f_d));
  return {v(0), v(1)};
}

}  // namespace viki
