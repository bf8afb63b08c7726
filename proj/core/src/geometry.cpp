#include "viki/geometry.hpp"

#include <cmath>
#include <numbers>

#include "viki/error.hpp"

namespace viki {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::DegenerateFeatures: return "DegenerateFeatures";
    case ErrorCode::SingularCombined: return "SingularCombined";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyBox: return "EmptyBox";
    case ErrorCode::NoValidDepth: return "NoValidDepth";
    case ErrorCode::NoTargetYet: return "NoTargetYet";
    case ErrorCode::FirstDetectionTimeout: return "FirstDetectionTimeout";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
  return {rotation * rhs.rotation, rotation * rhs.translation + translation};
}

bool RigidTransform::is_valid(double tol) const {
  const Mat3 should_be_identity = rotation.transpose() * rotation;
  return (should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(rotation.determinant() - 1.0) <= tol;
}

Vec3 transform_point(const RigidTransform& T, const Vec3& p) { return T.rotation * p + T.translation; }

Mat3 skew(const Vec3& t) {
  Mat3 s;
  s << 0.0, -t.z(), t.y(),
       t.z(), 0.0, -t.x(),
      -t.y(), t.x(), 0.0;
  return s;
}

VelocityAdjoint velocity_adjoint(const RigidTransform& T) {
  VelocityAdjoint ad;
  ad.matrix.setZero();
  ad.matrix.topLeftCorner<3, 3>() = T.rotation;
  ad.matrix.topRightCorner<3, 3>() = skew(T.translation) * T.rotation;
  ad.matrix.bottomRightCorner<3, 3>() = T.rotation;
  return ad;
}

Mat3 rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }
Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

double normalize_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double wrapped = std::remainder(angle, 2.0 * pi);  // in [-pi, pi]
  if (wrapped <= -pi) wrapped += 2.0 * pi;
  return wrapped;
}

}  // namespace viki
