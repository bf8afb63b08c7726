#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "viki/camera.hpp"
#include "viki/fusion.hpp"
#include "viki/hybrid.hpp"
#include "viki/kinematic_ctrl.hpp"
#include "viki/perception.hpp"
#include "viki/vehicle.hpp"
#include "viki/visual_servo.hpp"

namespace viki {

enum class ControlMode { Viki, VsOnly, MgbmStatic };
enum class Task { Placement, Forward };

std::string_view to_string(ControlMode mode) noexcept;
ControlMode parse_mode(std::string_view text);
std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view text);

struct CameraMount {
  CameraIntrinsics intrinsics;
  Vec3 position = Vec3::Zero();  // robot frame, m
  double yaw = 0.0;              // rad, 0 = forward
  double pitch = 0.0;            // rad, positive tilts down
  double max_range = 5.0;        // depth channel limit, m

  RigidTransform robot_T_camera() const;
};

struct LidarMount {
  Vec3 position = Vec3(0.3, 0.0, 1.10);
  int layers = 16;
  double min_elevation = -0.2617993877991494;  // -15 deg
  double max_elevation = 0.2617993877991494;   // +15 deg
  double azimuth_resolution = 0.003490658503988659;  // 0.2 deg
  int interpolated_rows = 112;
  double max_range = 100.0;

  RigidTransform robot_T_lidar() const { return RigidTransform::from_translation(position); }
  std::vector<double> elevations() const;
  int columns() const;
};

/// Complete description of one closed-loop experiment.
struct ScenarioConfig {
  VehicleParams vehicle;
  CameraMount front_camera;
  CameraMount rear_camera;
  LidarMount lidar;
  BlindSpotParams blind_spot;
  ObjectBox object;
  VehicleState start;
  DetectorModel detector;
  ServoGains front_gains;
  ServoGains rear_gains;
  KinGains forward_kin;
  KinGains backward_kin;
  SwitchThresholds thresholds;

  double dt = 0.044;
  long max_ticks = 4000;
  long warmup_ticks = 50;
  double odom_noise_xy = 0.0;     // m per tick
  double odom_noise_theta = 0.0;  // rad per tick
  ControlMode mode = ControlMode::Viki;
  Task task = Task::Placement;
  std::uint64_t seed = 1;
  bool stop_at_done = true;

  // Object position in the robot frame at the end of each visual stage.
  Vec2 forward_offset = Vec2(3.0, -0.8);
  Vec2 backward_offset = Vec2(-2.0, -0.3);
  // How much farther than the backward placement the Rotate waypoint sits.
  double rotate_extra = 2.0;
  DesiredPlacement front_placement;
  DesiredPlacement rear_placement;
  bool front_placement_given = false;
  bool rear_placement_given = false;

  bool smoothing = true;
  RobotJacobianMode jacobian_mode = RobotJacobianMode::Body;
  bool range_to_depth = false;
  Vec3 mgbm_extents = Vec3(0.1, 0.1, 0.4);

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Built-in scene: object 6 m ahead, full placement task.
ScenarioConfig default_scenario();

/// Fills derived fields (desired placement pixels and fallback depths) that
/// the file did not set explicitly.
void finalize(ScenarioConfig& cfg);

/// Parses a sectioned key = value file on top of default_scenario().
/// Throws ConfigError / IoError.
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const std::string& text);

/// Object at `offset` in the robot frame -> centre of its noise-free image box
/// in `camera` (robot at the origin, heading 0), and the camera-to-centre distance.
DesiredPlacement placement_for_offset(const CameraMount& camera, const ObjectBox& object, const Vec2& offset);

/// Value with an optional unit suffix (m, cm, mm, rad, deg) in SI units.
double parse_quantity(std::string_view text);

}  // namespace viki
