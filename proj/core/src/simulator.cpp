#include "viki/simulator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>

#include "viki/error.hpp"
#include "viki/kinematic_ctrl.hpp"

namespace viki {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

FeatureSet nan_features() {
  FeatureSet f;
  f.fill({kNaN, kNaN});
  return f;
}

Vec2 heading(double theta) { return {std::cos(theta), std::sin(theta)}; }

Mat2 planar_rotation(double theta) {
  Mat2 r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// Control-point setpoint that puts the object at `offset` in the robot frame.
Vec2 offset_setpoint(const Vec2& object, const Vec2& offset, double theta, double d) {
  return object - planar_rotation(theta) * offset + d * heading(theta);
}

FeatureSet static_features(const CameraMount& camera, const Vec3& extents, const Vec2& offset) {
  ObjectBox assumed{Vec3(offset.x(), offset.y(), 0.5 * extents.z()), extents};
  const auto box = project_box(assumed, camera.robot_T_camera(), camera.intrinsics);
  if (!box) throw Error(ErrorCode::ConfigError, "static target box is outside the image");
  return current_features(*box);
}

// Where the perception stack places the object when the robot sits exactly
// at the placement pose, in robot-frame ground coordinates.
Vec2 perceived_offset(const CameraMount& camera, const ObjectBox& object, const Vec2& offset, bool range_to_depth) {
  ObjectBox at_target = object;
  at_target.center.head<2>() = offset;
  const RigidTransform robot_T_camera = camera.robot_T_camera();
  const auto box = project_box(at_target, robot_T_camera, camera.intrinsics);
  if (!box) return offset;
  DepthImage depth(camera.intrinsics.width, camera.intrinsics.height);
  const PixelRect rect{static_cast<int>(std::floor(box->u0)), static_cast<int>(std::floor(box->v0)),
                       static_cast<int>(std::ceil(box->u2)) + 1, static_cast<int>(std::ceil(box->v2)) + 1};
  render_depth(Scene{at_target}, robot_T_camera, camera.intrinsics, camera.max_range, rect, depth);
  try {
    const double z_o = object_depth(shrink_bbox(*box), depth);
    const ObjectEstimate estimate = localize(box->center(), z_o, camera.intrinsics, range_to_depth);
    return transform_point(robot_T_camera, estimate.position).head<2>();
  } catch (const Error&) {
    return offset;
  }
}

}  // namespace

std::string_view to_string(ControllerUsed used) noexcept {
  switch (used) {
    case ControllerUsed::None: return "none";
    case ControllerUsed::VisualServo: return "vs";
    case ControllerUsed::Kinematic: return "kin";
  }
  return "none";
}

ControllerUsed parse_controller(std::string_view text) {
  if (text == "none") return ControllerUsed::None;
  if (text == "vs") return ControllerUsed::VisualServo;
  if (text == "kin") return ControllerUsed::Kinematic;
  throw Error(ErrorCode::ConfigError, "unknown controller '" + std::string(text) + "'");
}

std::shared_ptr<const BlindSpotMask> cached_blind_spot_mask(const CameraIntrinsics& K,
                                                            const RigidTransform& cam_T_lidar,
                                                            const BlindSpotParams& params) {
  static std::mutex mutex;
  static std::map<std::vector<double>, std::shared_ptr<const BlindSpotMask>> cache;
  std::vector<double> key{K.fu, K.fv, K.cu, K.cv, double(K.width), double(K.height), params.radius,
                          params.ground_height, params.step, params.sample_half_extent};
  key.insert(key.end(), cam_T_lidar.rotation.data(), cam_T_lidar.rotation.data() + 9);
  key.insert(key.end(), cam_T_lidar.translation.data(), cam_T_lidar.translation.data() + 3);
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::make_shared<const BlindSpotMask>(blind_spot_mask(K, cam_T_lidar, params));
  return slot;
}

PlacementController::PlacementController(const ScenarioConfig& cfg) : cfg_(cfg) {
  const RigidTransform front_T_robot = cfg_.front_camera.robot_T_camera().inverse();
  const RigidTransform rear_T_robot = cfg_.rear_camera.robot_T_camera().inverse();
  cam_T_lidar_ = front_T_robot * cfg_.lidar.robot_T_lidar();
  front_adjoint_ = velocity_adjoint(front_T_robot);
  rear_adjoint_ = velocity_adjoint(rear_T_robot);
  mask_ = cached_blind_spot_mask(cfg_.front_camera.intrinsics, cam_T_lidar_, cfg_.blind_spot);
  lidar_depth_ = DepthImage(cfg_.front_camera.intrinsics.width, cfg_.front_camera.intrinsics.height);
  fused_ = lidar_depth_;
  forward_setpoint_offset_ =
      perceived_offset(cfg_.front_camera, cfg_.object, cfg_.forward_offset, cfg_.range_to_depth);
  backward_setpoint_offset_ =
      perceived_offset(cfg_.rear_camera, cfg_.object, cfg_.backward_offset, cfg_.range_to_depth);
  if (cfg_.mode == ControlMode::MgbmStatic) {
    static_front_ = static_features(cfg_.front_camera, cfg_.mgbm_extents, cfg_.forward_offset);
    static_rear_ = static_features(cfg_.rear_camera, cfg_.mgbm_extents, cfg_.backward_offset);
  }
}

const CameraMount& PlacementController::active_camera() const {
  return state_.stage == Stage::Backward ? cfg_.rear_camera : cfg_.front_camera;
}

const DesiredPlacement& PlacementController::active_placement() const {
  return state_.stage == Stage::Backward ? cfg_.rear_placement : cfg_.front_placement;
}

PixelRect PlacementController::region_of_interest(const Detection& detection) const {
  const CameraIntrinsics& K = active_camera().intrinsics;
  const PixelPoint& od = active_placement().center;
  int u_lo = static_cast<int>(std::floor(od.u)) - 1;
  int v_lo = static_cast<int>(std::floor(od.v)) - 1;
  int u_hi = static_cast<int>(std::floor(od.u)) + 2;
  int v_hi = static_cast<int>(std::floor(od.v)) + 2;
  if (detection.detected) {
    u_lo = std::min(u_lo, static_cast<int>(std::floor(detection.bbox.u0)) - 1);
    v_lo = std::min(v_lo, static_cast<int>(std::floor(detection.bbox.v0)) - 1);
    u_hi = std::max(u_hi, static_cast<int>(std::ceil(detection.bbox.u2)) + 2);
    v_hi = std::max(v_hi, static_cast<int>(std::ceil(detection.bbox.v2)) + 2);
  }
  return {std::clamp(u_lo, 0, K.width), std::clamp(v_lo, 0, K.height), std::clamp(u_hi, 0, K.width),
          std::clamp(v_hi, 0, K.height)};
}

ControlOutput PlacementController::step(const SensorFrame& frame, const VehicleState& odom, long tick) {
  ControlOutput out;
  const Stage stage = state_.stage;
  const double d = cfg_.vehicle.wheelbase;
  if (stage == Stage::Done) return out;

  // Visual branch.
  Twist2 vs_out;
  Eigen::VectorXd feature_err;
  const bool visual_stage = stage == Stage::Forward || stage == Stage::Backward;
  if (visual_stage && frame.detection.detected && frame.camera_depth != nullptr) {
    const CameraMount& camera = active_camera();
    const CameraIntrinsics& K = camera.intrinsics;
    const DepthImage* depth = frame.camera_depth;
    if (stage == Stage::Forward && frame.lidar != nullptr) {
      const RangeImage dense = interpolate_range_image(*frame.lidar, cfg_.lidar.interpolated_rows);
      project_cloud_into(range_to_cloud(dense), cam_T_lidar_, K, lidar_depth_);
      fuse_depth_region(lidar_depth_, *frame.camera_depth, *mask_, frame.region, fused_);
      depth = &select_depth_source(DepthSource::Forward, fused_, *frame.camera_depth);
    }
    try {
      const BoundingBox& bbox = frame.detection.bbox;
      const double z_o = object_depth(shrink_bbox(bbox), *depth);
      const ObjectEstimate estimate = localize(bbox.center(), z_o, K, cfg_.range_to_depth);
      memory_.remember(estimate, planar_pose(odom) * camera.robot_T_camera());
      seen_target_ = true;

      const FeatureSet f = current_features(bbox);
      FeatureSet f_d;
      if (cfg_.mode == ControlMode::MgbmStatic) {
        f_d = stage == Stage::Forward ? *static_front_ : *static_rear_;
      } else {
        f_d = desired_features(bbox, z_o, active_placement(), *depth);
      }
      const ServoGains& gains = stage == Stage::Forward ? cfg_.front_gains : cfg_.rear_gains;
      const VelocityAdjoint& adjoint = stage == Stage::Forward ? front_adjoint_ : rear_adjoint_;
      vs_out = robot_velocity_vs(f, f_d, z_o, K, gains, adjoint, odom.theta, cfg_.vehicle, cfg_.jacobian_mode);
      out.cam_twist_norm = camera_twist(f, f_d, z_o, K, gains).norm();
      feature_err = feature_error(f, f_d);
      out.features = f;
      out.desired = f_d;
      out.max_feature_err = feature_err.cwiseAbs().maxCoeff();
      out.z_o = z_o;
      out.c = 1;
    } catch (const Error&) {
      out = ControlOutput{};
      feature_err.resize(0);
    }
  }

  // Kinematic branch.
  std::optional<Twist2> kin_out;
  Vec2 pos_err = Vec2::Constant(std::numeric_limits<double>::infinity());
  if (memory_.has_target()) {
    const Vec2 object = memory_.target()->position;
    Vec2 setpoint;
    const KinGains* gains = &cfg_.forward_kin;
    if (stage == Stage::Rotate) {
      if (!waypoint_) {
        const Vec2 past(backward_setpoint_offset_.x() - cfg_.rotate_extra, backward_setpoint_offset_.y());
        waypoint_ = offset_setpoint(object, past, odom.theta, d);
      }
      setpoint = *waypoint_;
    } else if (stage == Stage::Forward) {
      setpoint = offset_setpoint(object, forward_setpoint_offset_, odom.theta, d);
    } else {
      setpoint = offset_setpoint(object, backward_setpoint_offset_, odom.theta, d);
      gains = &cfg_.backward_kin;
    }
    pos_err = position_error(control_point(odom, d), TargetPoint{setpoint});
    kin_out = robot_velocity_kin(pos_err, odom.theta, cfg_.vehicle, *gains);
    out.kin_target = setpoint;
  }

  // Gating.
  Twist2 raw;
  if (!seen_target_) {
    out.controller = ControllerUsed::None;
  } else if (stage == Stage::Rotate) {
    raw = *kin_out;
    out.controller = ControllerUsed::Kinematic;
  } else if (cfg_.mode == ControlMode::Viki) {
    raw = hybrid_law(out.c == 1, vs_out, kin_out);
    out.controller = out.c == 1 ? ControllerUsed::VisualServo : ControllerUsed::Kinematic;
  } else if (out.c == 1) {
    raw = vs_out;
    out.controller = ControllerUsed::VisualServo;
  }

  Twist2 twist = saturate_twist(raw, cfg_.vehicle);
  if (cfg_.smoothing && out.controller != ControllerUsed::None) twist = smooth(twist, previous_);
  previous_ = twist;
  out.twist = twist;
  if (out.controller != ControllerUsed::None) {
    out.command = saturate({twist.velocity, steering_from_twist(twist, cfg_.vehicle)}, cfg_.vehicle);
  }
  out.yaw_rate = yaw_rate_of(out.command, cfg_.vehicle);

  if (cfg_.stop_at_done) {
    PlacementState next = placement_step(state_, feature_err, pos_err, cfg_.thresholds, tick + 1);
    if (cfg_.task == Task::Forward && next.stage == Stage::Rotate) next.stage = Stage::Done;
    if (next.stage != state_.stage) waypoint_.reset();
    state_ = next;
  }
  return out;
}

Vec2 ground_truth_target(const ScenarioConfig& cfg, double final_theta) {
  const Vec2& offset = cfg.task == Task::Placement ? cfg.backward_offset : cfg.forward_offset;
  return cfg.object.center.head<2>() - planar_rotation(final_theta) * offset;
}

RunResult simulate(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  RunResult result;
  if (cfg.max_ticks == 0) return result;

  PlacementController controller(cfg);
  DetectorModel model = cfg.detector;
  model.seed = cfg.seed;
  SyntheticDetector detector(model);
  std::mt19937_64 odom_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> unit(0.0, 1.0);

  const Scene scene{cfg.object};
  const RigidTransform robot_T_lidar = cfg.lidar.robot_T_lidar();
  DepthImage front_depth(cfg.front_camera.intrinsics.width, cfg.front_camera.intrinsics.height);
  DepthImage rear_depth(cfg.rear_camera.intrinsics.width, cfg.rear_camera.intrinsics.height);

  // Only beams that can land in the front image matter to the controller.
  const CameraIntrinsics& fk = cfg.front_camera.intrinsics;
  const double scan_half_width = std::abs(cfg.front_camera.yaw) +
                                 std::atan(std::max(fk.cu, fk.width - fk.cu) / fk.fu) + 0.2;
  VehicleState truth = cfg.start;
  Vec3 drift = Vec3::Zero();
  double elapsed_ms = 0.0;
  long timed = 0;

  for (long tick = 0; tick < cfg.max_ticks; ++tick) {
    const double t = static_cast<double>(tick) * cfg.dt;
    VehicleState odom = truth;
    if (cfg.odom_noise_xy > 0.0 || cfg.odom_noise_theta > 0.0) {
      drift += Vec3(cfg.odom_noise_xy * unit(odom_rng), cfg.odom_noise_xy * unit(odom_rng),
                    cfg.odom_noise_theta * unit(odom_rng));
      odom = {truth.x + drift.x(), truth.y + drift.y(), normalize_angle(truth.theta + drift.z())};
    }

    LogRecord row;
    row.tick = tick;
    row.t = t;
    row.stage = controller.stage();
    row.x = odom.x;
    row.y = odom.y;
    row.theta = odom.theta;
    row.x_true = truth.x;
    row.y_true = truth.y;
    row.theta_true = truth.theta;

    if (controller.stage() == Stage::Done) {
      row.features = nan_features();
      row.desired = nan_features();
      row.max_feature_err = row.x_d = row.y_d = row.z_o = kNaN;
      result.log.push_back(row);
      break;
    }

    const CameraMount& camera = controller.active_camera();
    const RigidTransform world_T_robot = planar_pose(truth);
    const RigidTransform world_T_camera = world_T_robot * camera.robot_T_camera();
    std::optional<bool> forced;
    if (options.detections && tick < static_cast<long>(options.detections->size())) {
      forced = !(*options.detections)[static_cast<std::size_t>(tick)];
    }
    Detection detection = detector.detect(cfg.object, world_T_camera, camera.intrinsics, t, forced);
    result.trace.push_back({t, detection.detected, detection.bbox});
    if (controller.stage() == Stage::Rotate) detection.detected = false;

    SensorFrame frame;
    frame.detection = detection;
    RangeImage scan;
    if (detection.detected) {
      const bool front = controller.stage() == Stage::Forward;
      DepthImage& depth = front ? front_depth : rear_depth;
      frame.region = controller.region_of_interest(detection);
      render_depth(scene, world_T_camera, camera.intrinsics, camera.max_range, frame.region, depth);
      frame.camera_depth = &depth;
      if (front) {
        scan = lidar_scan(scene, world_T_robot * robot_T_lidar, cfg.lidar, -scan_half_width, scan_half_width);
        frame.lidar = &scan;
      }
    }

    const auto start = std::chrono::steady_clock::now();
    const ControlOutput out = controller.step(frame, odom, tick);
    elapsed_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    ++timed;

    if (!controller.seen_target() && tick + 1 == cfg.warmup_ticks) {
      throw Error(ErrorCode::FirstDetectionTimeout, "no detection during the warm-up period");
    }

    row.c = out.c;
    row.controller = out.controller;
    row.features = out.features.value_or(nan_features());
    row.desired = out.desired.value_or(nan_features());
    row.max_feature_err = out.features ? out.max_feature_err : kNaN;
    row.v_cmd = out.command.velocity;
    row.psi_cmd = out.command.steering;
    row.omega_cmd = out.yaw_rate;
    row.x_d = out.kin_target ? out.kin_target->x() : kNaN;
    row.y_d = out.kin_target ? out.kin_target->y() : kNaN;
    row.z_o = out.c == 1 ? out.z_o : kNaN;
    row.cam_twist_norm = out.cam_twist_norm;
    result.log.push_back(row);

    truth = integrate(truth, out.command, cfg.dt, cfg.vehicle);
  }
  result.iteration_time_mean_ms = timed > 0 ? elapsed_ms / static_cast<double>(timed) : 0.0;
  return result;
}

std::vector<LogRecord> run_scenario(const ScenarioConfig& cfg) { return simulate(cfg).log; }

}  // namespace viki
