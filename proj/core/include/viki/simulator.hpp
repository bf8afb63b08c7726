#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "viki/fusion.hpp"
#include "viki/hybrid.hpp"
#include "viki/perception.hpp"
#include "viki/scenario.hpp"
#include "viki/visual_servo.hpp"
#include "viki/world.hpp"

namespace viki {

enum class ControllerUsed { None, VisualServo, Kinematic };

std::string_view to_string(ControllerUsed used) noexcept;
ControllerUsed parse_controller(std::string_view text);

/// One row of the run log. Undefined quantities are NaN.
struct LogRecord {
  long tick = 0;
  double t = 0.0;
  Stage stage = Stage::Forward;
  int c = 0;
  ControllerUsed controller = ControllerUsed::None;
  FeatureSet features{};
  FeatureSet desired{};
  double max_feature_err = 0.0;
  double v_cmd = 0.0;
  double psi_cmd = 0.0;
  double omega_cmd = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double x_true = 0.0;
  double y_true = 0.0;
  double theta_true = 0.0;
  double x_d = 0.0;
  double y_d = 0.0;
  double z_o = 0.0;
  double cam_twist_norm = 0.0;
};

/// Detector output of one tick, as stored in detection traces.
struct DetectionSample {
  double t = 0.0;
  bool detected = false;
  BoundingBox bbox;
};

/// Sensor data handed to the controller for one tick.
struct SensorFrame {
  Detection detection;
  const RangeImage* lidar = nullptr;        // native scan; used in Forward
  const DepthImage* camera_depth = nullptr;  // active camera
  PixelRect region;                          // pixels where camera_depth is valid
};

struct ControlOutput {
  int c = 0;
  ControllerUsed controller = ControllerUsed::None;
  std::optional<FeatureSet> features;
  std::optional<FeatureSet> desired;
  double max_feature_err = 0.0;
  double z_o = 0.0;
  double cam_twist_norm = 0.0;
  std::optional<Vec2> kin_target;
  Twist2 twist;  // after smoothing, before steering conversion
  VehicleCommand command;
  double yaw_rate = 0.0;
};

/// Per-tick perception and control stack: fusion, detection post-processing,
/// both controllers, gating, smoothing and the placement state machine.
class PlacementController {
 public:
  explicit PlacementController(const ScenarioConfig& cfg);

  Stage stage() const { return state_.stage; }
  bool seen_target() const { return seen_target_; }

  /// Camera the detector should look through at the current stage
  /// (Rotate uses the front camera, whose output is ignored).
  const CameraMount& active_camera() const;
  const DesiredPlacement& active_placement() const;

  /// Pixels the controller reads from the camera depth for `detection`.
  PixelRect region_of_interest(const Detection& detection) const;

  ControlOutput step(const SensorFrame& frame, const VehicleState& odom, long tick);

  const BlindSpotMask& mask() const { return *mask_; }
  const DepthImage& fused_depth() const { return fused_; }

 private:
  ScenarioConfig cfg_;
  std::shared_ptr<const BlindSpotMask> mask_;
  RigidTransform cam_T_lidar_;
  VelocityAdjoint front_adjoint_;
  VelocityAdjoint rear_adjoint_;
  Vec2 forward_setpoint_offset_ = Vec2::Zero();
  Vec2 backward_setpoint_offset_ = Vec2::Zero();
  std::optional<FeatureSet> static_front_;
  std::optional<FeatureSet> static_rear_;
  DepthImage lidar_depth_;
  DepthImage fused_;
  PlacementState state_;
  TargetMemory memory_;
  std::optional<Vec2> waypoint_;
  Twist2 previous_;
  bool seen_target_ = false;
};

/// Blind-spot mask shared by every controller with the same geometry.
std::shared_ptr<const BlindSpotMask> cached_blind_spot_mask(const CameraIntrinsics& K,
                                                            const RigidTransform& cam_T_lidar,
                                                            const BlindSpotParams& params);

struct RunOptions {
  /// Replayed detector outcomes, one per tick; ticks past the end use the
  /// detector's own miss model.
  std::optional<std::vector<bool>> detections;
};

struct RunResult {
  std::vector<LogRecord> log;
  std::vector<DetectionSample> trace;
  double iteration_time_mean_ms = 0.0;
};

/// Closed-loop run. Throws FirstDetectionTimeout or ConfigError.
RunResult simulate(const ScenarioConfig& cfg, const RunOptions& options = {});

std::vector<LogRecord> run_scenario(const ScenarioConfig& cfg);

/// Rear-axle position that puts the object at the task's final offset for
/// the given final heading.
Vec2 ground_truth_target(const ScenarioConfig& cfg, double final_theta);

}  // namespace viki
