#pragma once

// Independent reference implementations used by unit and acceptance tests.
// They follow the textbook definitions directly and share no code with the
// library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "viki/camera.hpp"
#include "viki/error.hpp"
#include "viki/fusion.hpp"
#include "viki/geometry.hpp"
#include "viki/kinematic_ctrl.hpp"
#include "viki/perception.hpp"
#include "viki/scenario.hpp"
#include "viki/visual_servo.hpp"
#include "viki/vehicle.hpp"

#define EXPECT_VIKI_ERROR(stmt, ecode)                              \
  do {                                                              \
    try {                                                           \
      stmt;                                                         \
      ADD_FAILURE() << "expected " << viki::to_string(ecode);       \
    } catch (const viki::Error& err) {                              \
      EXPECT_EQ(err.code(), ecode) << err.what();                   \
    }                                                               \
  } while (0)

namespace oracle {

using viki::Vec2;
using viki::Vec3;

inline viki::RigidTransform random_transform(std::mt19937_64& rng, double max_t = 3.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Quaterniond q(u(rng), u(rng), u(rng), u(rng));
  if (q.norm() < 1e-3) q = Eigen::Quaterniond::Identity();
  q.normalize();
  return {q.toRotationMatrix(), Vec3(u(rng), u(rng), u(rng)) * max_t};
}

// Ties go to the even neighbour, computed without the floating-point
// environment: check the fractional part explicitly.
inline double round_half_even(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac < 0.5) return f;
  if (frac > 0.5) return f + 1.0;
  return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

inline viki::BoundingBox shrink(const viki::BoundingBox& bb) {
  const double w = bb.u2 - bb.u0;
  const double h = bb.v2 - bb.v0;
  return {round_half_even(bb.u0 + 0.2 * w), round_half_even(bb.v0 + 0.2 * h), round_half_even(bb.u2 - 0.2 * w),
          round_half_even(bb.v2 - 0.2 * h)};
}

// Visits every integer pixel of the clipped inclusive box.
inline double mean_depth(const viki::BoundingBox& bb, const viki::DepthImage& depth, bool& ok) {
  double sum = 0.0;
  long n = 0;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      if (u < bb.u0 || u > bb.u2 || v < bb.v0 || v > bb.v2) continue;
      const float z = depth.at(u, v);
      if (z != 0.0f) {
        sum += z;
        ++n;
      }
    }
  }
  ok = n > 0;
  return ok ? sum / static_cast<double>(n) : 0.0;
}

inline viki::Twist2 smooth(const viki::Twist2& cur, const viki::Twist2& prev) {
  return {(1.0 - (cur.velocity - prev.velocity)) * cur.velocity,
          (1.0 - (cur.yaw_rate - prev.yaw_rate)) * cur.yaw_rate};
}

// Every grid sample of the full square, visited in reverse order, tested
// against the disk and projected with an explicit pinhole model.
inline viki::BlindSpotMask mask(const viki::CameraIntrinsics& K, const viki::RigidTransform& cam_T_lidar,
                                const viki::BlindSpotParams& p) {
  viki::BlindSpotMask m(K.width, K.height);
  if (!(p.radius > 0.0)) return m;
  const long n = std::lround(2.0 * p.sample_half_extent / p.step);
  for (long i = n; i >= 0; --i) {
    const double x = -p.sample_half_extent + static_cast<double>(i) * p.step;
    for (long j = n; j >= 0; --j) {
      const double y = -p.sample_half_extent + static_cast<double>(j) * p.step;
      if (x * x + y * y > p.radius * p.radius) continue;
      const Vec3 c = cam_T_lidar.rotation * Vec3(x, y, p.ground_height) + cam_T_lidar.translation;
      if (!(c.z() > 0.0)) continue;
      const double u = K.cu + K.fu * c.x() / c.z();
      const double v = K.cv + K.fv * c.y() / c.z();
      if (!(u > 0.0 && u < K.width && v > 0.0 && v < K.height)) continue;
      m.at(static_cast<int>(std::floor(u)), static_cast<int>(std::floor(v))) = 1;
    }
  }
  return m;
}

// Pixel motion of a static point when the camera moves by the small body
// twist `xi` for unit time: the point seen from the displaced camera.
inline viki::PixelPoint moved_pixel(const Vec3& p, const Eigen::Matrix<double, 6, 1>& xi, double h,
                                    const viki::CameraIntrinsics& K) {
  const Vec3 w = xi.tail<3>() * h;
  const double angle = w.norm();
  const Eigen::Matrix3d R =
      angle > 0.0 ? Eigen::AngleAxisd(angle, w / angle).toRotationMatrix() : Eigen::Matrix3d::Identity();
  const Vec3 t = xi.head<3>() * h;
  const Vec3 q = R.transpose() * (p - t);
  return {K.cu + K.fu * q.x() / q.z(), K.cv + K.fv * q.y() / q.z()};
}

// Bicycle model integrated with many explicit sub-steps.
inline viki::VehicleState substep(viki::VehicleState s, double v, double psi, double d, double dt, int n) {
  const double h = dt / n;
  for (int i = 0; i < n; ++i) {
    const double w = v * std::tan(psi) / d;
    s.x += v * std::cos(s.theta) * h;
    s.y += v * std::sin(s.theta) * h;
    s.theta += w * h;
  }
  s.theta = std::atan2(std::sin(s.theta), std::cos(s.theta));
  return s;
}

// Corners of the projected object hull and the true camera-frame depth of the
// object centre, seen from a robot pose.
struct ServoView {
  viki::FeatureSet features{};
  double depth = 0.0;
};

inline std::optional<ServoView> view_from(const viki::CameraMount& cam, const viki::ObjectBox& obj,
                                          const viki::VehicleState& s, double margin = 5.0) {
  const viki::RigidTransform world_T_camera = viki::planar_pose(s) * cam.robot_T_camera();
  const auto bb = viki::project_box(obj, world_T_camera, cam.intrinsics);
  if (!bb) return std::nullopt;
  const auto& K = cam.intrinsics;
  if (bb->u0 < margin || bb->v0 < margin || bb->u2 > K.width - 1 - margin || bb->v2 > K.height - 1 - margin) {
    return std::nullopt;
  }
  return ServoView{viki::current_features(*bb), (world_T_camera.inverse() * obj.center).z()};
}

inline double error_norm(const viki::FeatureSet& f, const viki::FeatureSet& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += (f[i].u - g[i].u) * (f[i].u - g[i].u) + (f[i].v - g[i].v) * (f[i].v - g[i].v);
  }
  return std::sqrt(s);
}

// One closed-loop tick of the visual servo from a random pose near a random
// placement. Returns the feature-error norm before and after the tick, or
// nothing when the sampled pose does not give a usable view.
struct DescentStep {
  double before = 0.0;
  double after = 0.0;
};

inline std::optional<DescentStep> vs_descent_trial(const viki::ScenarioConfig& cfg, bool rear, std::mt19937_64& rng,
                                                   double dt = 0.01) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const viki::CameraMount& cam = rear ? cfg.rear_camera : cfg.front_camera;
  const viki::ServoGains& gains = rear ? cfg.rear_gains : cfg.front_gains;
  const Vec2 offset = rear ? cfg.backward_offset : cfg.forward_offset;
  const double heading = 0.3 * u(rng);
  const Vec2 xy = cfg.object.center.head<2>() - Eigen::Rotation2Dd(heading) * offset;
  const viki::VehicleState target{xy.x(), xy.y(), heading};
  const double along = 0.8 * u(rng);
  const double across = 0.15 * u(rng);
  const viki::VehicleState start{target.x + along * std::cos(heading) - across * std::sin(heading),
                                 target.y + along * std::sin(heading) + across * std::cos(heading),
                                 heading + 0.1 * u(rng)};
  const auto want = view_from(cam, cfg.object, target);
  const auto now = view_from(cam, cfg.object, start);
  if (!want || !now) return std::nullopt;
  const double before = error_norm(now->features, want->features);
  if (before < 1.0) return std::nullopt;
  const viki::VelocityAdjoint ad = viki::velocity_adjoint(cam.robot_T_camera().inverse());
  const viki::Twist2 v = viki::robot_velocity_vs(now->features, want->features, now->depth, cam.intrinsics, gains, ad,
                                                 start.theta, cfg.vehicle);
  const auto next = view_from(cam, cfg.object, viki::integrate_twist(start, v, dt), 0.0);
  if (!next) return DescentStep{before, std::numeric_limits<double>::infinity()};
  return DescentStep{before, error_norm(next->features, want->features)};
}

// One tick of the kinematic controller for a target at `distance` along
// `bearing` from the control point, with the robot at heading `theta`.
inline DescentStep kin_descent_trial(double theta, double bearing, double distance, const viki::KinGains& gains,
                                     double dt = 0.05) {
  const viki::VehicleParams params;
  const viki::VehicleState s{0.0, 0.0, theta};
  const Vec2 h = viki::control_point(s, params.wheelbase);
  const viki::TargetPoint target{h + distance * Vec2(std::cos(theta + bearing), std::sin(theta + bearing))};
  const viki::Twist2 v = viki::robot_velocity_kin(viki::position_error(h, target), theta, params, gains);
  const viki::VehicleState next = viki::integrate_twist(s, v, dt);
  return {distance, (target.position - viki::control_point(next, params.wheelbase)).norm()};
}

}  // namespace oracle
