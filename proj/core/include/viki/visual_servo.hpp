#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "viki/camera.hpp"
#include "viki/fusion.hpp"
#include "viki/geometry.hpp"
#include "viki/perception.hpp"
#include "viki/vehicle.hpp"

namespace viki {

/// Four bounding-box corners in BoundingBox::corners() order.
using FeatureSet = std::array<PixelPoint, 4>;

/// Positive diagonal gain on the six camera-twist axes.
struct ServoGains {
  Vec6 lambda = Vec6::Ones();

  /// Accepts 6 entries, or 5 entries with the last one repeated for the
  /// final rotational axis. Throws ConfigError on other sizes or
  /// non-positive entries.
  static ServoGains from_values(const std::vector<double>& values);
};

struct DesiredPlacement {
  PixelPoint center{640.0, 600.0};
  double fallback_depth = 2.0;  // used when the depth image is unknown at `center`
};

/// How (v, w) enters the 6-D robot twist before the camera adjoint.
enum class RobotJacobianMode {
  Body,          // [v, 0, 0, 0, 0, w]
  Planar,  // planar Jacobian rows in x/y, w on the yaw axis
};

FeatureSet current_features(const BoundingBox& bb);

/// Desired corners centred on the placement pixel, with the current box
/// size scaled by Z_o / Z_d. Throws NonPositiveDepth.
FeatureSet desired_features(const BoundingBox& bb, double Z_o, const DesiredPlacement& placement,
                            const DepthImage& depth);

/// Desired-depth lookup used by desired_features.
double desired_depth(const DesiredPlacement& placement, const DepthImage& depth);

/// Stacked f - f_d.
Eigen::VectorXd feature_error(const FeatureSet& f, const FeatureSet& f_d);

/// Moore-Penrose inverse via SVD, dropping singular values below
/// `relative_cutoff * sigma_max`.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double relative_cutoff = 1e-10);

/// Classic IBVS law V_c = -lambda L^+ (f - f_d).
Vec6 camera_twist(const FeatureSet& f, const FeatureSet& f_d, double Z_o, const CameraIntrinsics& K,
                  const ServoGains& gains);

Eigen::Matrix<double, 6, 2> robot_jacobian(RobotJacobianMode mode, double theta, double d);

/// IBVS law expressed in robot velocities. `camera_from_robot` maps robot
/// body twists into the camera frame, i.e. velocity_adjoint(camera_T_robot).
/// Throws DegenerateFeatures or SingularCombined.
Twist2 robot_velocity_vs(const FeatureSet& f, const FeatureSet& f_d, double Z_o, const CameraIntrinsics& K,
                         const ServoGains& gains, const VelocityAdjoint& camera_from_robot, double theta,
                         const VehicleParams& params, RobotJacobianMode mode = RobotJacobianMode::Body);

}  // namespace viki
