#pragma once

#include "viki/geometry.hpp"
#include "viki/vehicle.hpp"

namespace viki {

struct KinGains {
  Vec2 k = Vec2(2.0, 1.0);
};

struct TargetPoint {
  Vec2 position = Vec2::Zero();  // world / odometry frame, m
};

/// h_d - h. The contracting sign; see README for the convention.
Vec2 position_error(const Vec2& h, const TargetPoint& target);

/// J_b(theta, d)^-1 (k (.) tanh(err)), before any saturation.
Twist2 robot_velocity_kin(const Vec2& err, double theta, const VehicleParams& params, const KinGains& gains);

}  // namespace viki
