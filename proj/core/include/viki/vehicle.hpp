#pragma once

#include "viki/geometry.hpp"

namespace viki {

/// Planar pose of the rear-axle reference point. Heading in (-pi, pi].
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Actuation: linear velocity (m/s) and steering angle (rad).
struct VehicleCommand {
  double velocity = 0.0;
  double steering = 0.0;
};

/// Body twist of the car: linear velocity (m/s) and yaw rate (rad/s).
struct Twist2 {
  double velocity = 0.0;
  double yaw_rate = 0.0;

  friend bool operator==(const Twist2&, const Twist2&) = default;
};

struct VehicleParams {
  double wheelbase = 0.5;         // d, also the control-point offset
  double max_velocity = 0.5;
  double max_steering = 0.44;
  double velocity_floor = 1e-6;   // keeps the steering conversion defined at v = 0

  /// Largest yaw rate reachable at full speed and full lock.
  double max_yaw_rate() const;
};

/// [[cos, -d sin], [sin, d cos]]: maps (v, w) to the velocity of the point
/// `d` ahead of the rear axle.
Mat2 body_jacobian(double theta, double d);

/// Point the kinematic controller steers: `d` ahead of the rear axle.
Vec2 control_point(const VehicleState& s, double d);

/// One explicit-Euler step of the bicycle model.
VehicleState integrate(const VehicleState& s, const VehicleCommand& cmd, double dt,
                       const VehicleParams& params);

/// Explicit-Euler step driven directly by a body twist (no steering limits).
VehicleState integrate_twist(const VehicleState& s, const Twist2& twist, double dt);

double steering_from_twist(const Twist2& twist, const VehicleParams& params);

VehicleCommand saturate(const VehicleCommand& cmd, const VehicleParams& params);

/// Clamps v to +-max_velocity and w to +-max_yaw_rate.
Twist2 saturate_twist(const Twist2& twist, const VehicleParams& params);

/// Yaw rate actually produced by a saturated command.
double yaw_rate_of(const VehicleCommand& cmd, const VehicleParams& params);

RigidTransform planar_pose(const VehicleState& s);

}  // namespace viki
