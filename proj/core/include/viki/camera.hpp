#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "viki/geometry.hpp"

namespace viki {

/// Pinhole intrinsics. Square pixels (fu == fv) are the supported
/// configuration for the interaction matrix, which uses fu.
struct CameraIntrinsics {
  double fu = 920.0;
  double fv = 920.0;
  double cu = 640.0;
  double cv = 360.0;
  int width = 1280;
  int height = 720;

  bool square_pixels(double tol = 1e-9) const;
};

struct PixelPoint {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

using InteractionRow = Eigen::Matrix<double, 2, 6>;

/// Projects a camera-frame point (z optical axis, x right, y down).
/// Throws BehindCamera when z <= 0.
PixelPoint project(const Vec3& p, const CameraIntrinsics& K);

/// Unit-free ray direction through pixel (u, v), z component 1.
Vec3 back_project_ray(const PixelPoint& px, const CameraIntrinsics& K);

/// 2x6 image Jacobian of one point feature. `f` is relative to the principal
/// point. Throws NonPositiveDepth when Z <= 0.
InteractionRow interaction_row(const PixelPoint& f, double Z, double focal);

/// Stacked image Jacobian for absolute pixel features sharing depth Z.
/// Throws DegenerateFeatures when fewer than 3 features are given or the
/// stack is numerically rank deficient.
Eigen::MatrixXd interaction_matrix(std::span<const PixelPoint> features, double Z,
                                   const CameraIntrinsics& K);

/// Rotation robot_R_camera of an optical frame looking along heading `yaw`
/// (0 = robot forward) and tilted down by `pitch`.
Mat3 optical_mount_rotation(double yaw, double pitch);

}  // namespace viki
