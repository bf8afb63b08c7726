#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace viki {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Rigid transform p' = R p + t. Maps coordinates from a source frame into
/// a target frame; `a_T_b` takes points expressed in b into a.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) { return {Mat3::Identity(), t}; }

  RigidTransform inverse() const;
  RigidTransform operator*(const RigidTransform& rhs) const;
  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }

  /// True when the rotation block is orthonormal with det +1.
  bool is_valid(double tol = 1e-9) const;
};

/// 6x6 matrix mapping body twists [v; w] between two rigidly attached frames.
struct VelocityAdjoint {
  Mat6 matrix = Mat6::Identity();

  Vec6 operator*(const Vec6& twist) const { return matrix * twist; }
};

Vec3 transform_point(const RigidTransform& T, const Vec3& p);

Mat3 skew(const Vec3& t);

/// [[R, [t]x R], [0, R]]. For T = a_T_b, maps a twist expressed in b into a.
VelocityAdjoint velocity_adjoint(const RigidTransform& T);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

}  // namespace viki
