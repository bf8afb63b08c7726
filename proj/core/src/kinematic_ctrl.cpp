#include "viki/kinematic_ctrl.hpp"

#include <cmath>

namespace viki {

Vec2 position_error(const Vec2& h, const TargetPoint& target) { return target.position - h; }

Twist2 robot_velocity_kin(const Vec2& err, double theta, const VehicleParams& params, const KinGains& gains) {
  const Vec2 shaped = gains.k.cwiseProduct(err.array().tanh().matrix());
  // Closed-form inverse of the planar Jacobian (det = d).
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double d = params.wheelbase;
  return {c * shaped.x() + s * shaped.y(), (-s * shaped.x() + c * shaped.y()) / d};
}

}  // namespace viki
