#include "viki/hybrid.hpp"

#include "viki/error.hpp"

namespace viki {

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Forward: return "forward";
    case Stage::Rotate: return "rotate";
    case Stage::Backward: return "backward";
    case Stage::Done: return "done";
  }
  return "unknown";
}

Twist2 hybrid_law(bool detected, const Twist2& vs_out, const std::optional<Twist2>& kin_out) {
  if (detected) return vs_out;
  if (!kin_out) throw Error(ErrorCode::NoTargetYet, "no detection has been made yet");
  return *kin_out;
}

Twist2 smooth(const Twist2& current, const Twist2& previous) {
  return {(1.0 - (current.velocity - previous.velocity)) * current.velocity,
          (1.0 - (current.yaw_rate - previous.yaw_rate)) * current.yaw_rate};
}

TargetPoint update_target(const ObjectEstimate& estimate, const RigidTransform& world_T_camera) {
  const Vec3 world = transform_point(world_T_camera, estimate.position);
  return {Vec2(world.x(), world.y())};
}

bool within_band(const Eigen::Ref<const Eigen::VectorXd>& err, double tol) {
  return err.size() > 0 && (err.array().abs() < tol).all();
}

PlacementState placement_step(const PlacementState& state, const Eigen::Ref<const Eigen::VectorXd>& feature_err,
                              const Vec2& pos_err, const SwitchThresholds& thresholds, long tick) {
  switch (state.stage) {
    case Stage::Forward:
      if (within_band(feature_err, thresholds.feature_tol)) return {Stage::Rotate, tick};
      break;
    case Stage::Rotate:
      if (within_band(pos_err, thresholds.position_tol)) return {Stage::Backward, tick};
      break;
    case Stage::Backward:
      if (within_band(feature_err, thresholds.feature_tol)) return {Stage::Done, tick};
      break;
    case Stage::Done:
      break;
  }
  return state;
}

}  // namespace viki
