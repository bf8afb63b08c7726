#include "viki/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace viki {

double VehicleParams::max_yaw_rate() const { return max_velocity * std::tan(max_steering) / wheelbase; }

Mat2 body_jacobian(double theta, double d) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 J;
  J << c, -d * s,
       s, d * c;
  return J;
}

Vec2 control_point(const VehicleState& s, double d) {
  return {s.x + d * std::cos(s.theta), s.y + d * std::sin(s.theta)};
}

VehicleState integrate(const VehicleState& s, const VehicleCommand& cmd, double dt,
                       const VehicleParams& params) {
  return integrate_twist(s, {cmd.velocity, yaw_rate_of(cmd, params)}, dt);
}

VehicleState integrate_twist(const VehicleState& s, const Twist2& twist, double dt) {
  VehicleState next;
  next.x = s.x + twist.velocity * std::cos(s.theta) * dt;
  next.y = s.y + twist.velocity * std::sin(s.theta) * dt;
  next.theta = normalize_angle(s.theta + twist.yaw_rate * dt);
  return next;
}

double steering_from_twist(const Twist2& twist, const VehicleParams& params) {
  const double v = twist.velocity;
  const double floored = (v < 0.0 ? -1.0 : 1.0) * std::max(std::abs(v), params.velocity_floor);
  const double psi = std::atan(params.wheelbase * twist.yaw_rate / floored);
  return std::clamp(psi, -params.max_steering, params.max_steering);
}

VehicleCommand saturate(const VehicleCommand& cmd, const VehicleParams& params) {
  return {std::clamp(cmd.velocity, -params.max_velocity, params.max_velocity),
          std::clamp(cmd.steering, -params.max_steering, params.max_steering)};
}

Twist2 saturate_twist(const Twist2& twist, const VehicleParams& params) {
  const double w_max = params.max_yaw_rate();
  return {std::clamp(twist.velocity, -params.max_velocity, params.max_velocity),
          std::clamp(twist.yaw_rate, -w_max, w_max)};
}

double yaw_rate_of(const VehicleCommand& cmd, const VehicleParams& params) {
  return cmd.velocity * std::tan(cmd.steering) / params.wheelbase;
}

RigidTransform planar_pose(const VehicleState& s) {
  return {rot_z(s.theta), Vec3(s.x, s.y, 0.0)};
}

}  // namespace viki
