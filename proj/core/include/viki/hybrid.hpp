#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "viki/geometry.hpp"
#include "viki/kinematic_ctrl.hpp"
#include "viki/perception.hpp"
#include "viki/vehicle.hpp"

namespace viki {

enum class Stage { Forward = 1, Rotate = 2, Backward = 3, Done = 4 };

std::string_view to_string(Stage stage) noexcept;

struct PlacementState {
  Stage stage = Stage::Forward;
  long entered_at = 0;  // tick index
};

struct SwitchThresholds {
  double feature_tol = 2.0;     // px
  double position_tol = 0.01;   // m
};

/// Detection present: visual servoing output. Detection absent: kinematic
/// output, which requires a memorised target (NoTargetYet otherwise).
Twist2 hybrid_law(bool detected, const Twist2& vs_out, const std::optional<Twist2>& kin_out);

/// Elementwise V = (1 - (V_n - V_prev)) * V_n on the raw SI values.
Twist2 smooth(const Twist2& current, const Twist2& previous);

/// Object position moved to the world frame and dropped onto the ground plane.
TargetPoint update_target(const ObjectEstimate& estimate, const RigidTransform& world_T_camera);

/// Last object position seen by any camera.
class TargetMemory {
 public:
  void remember(const ObjectEstimate& estimate, const RigidTransform& world_T_camera) {
    target_ = update_target(estimate, world_T_camera);
  }
  bool has_target() const { return target_.has_value(); }
  const std::optional<TargetPoint>& target() const { return target_; }

 private:
  std::optional<TargetPoint> target_;
};

/// True when every component lies strictly inside (-tol, tol).
bool within_band(const Eigen::Ref<const Eigen::VectorXd>& err, double tol);

/// Forward -> Rotate on feature convergence, Rotate -> Backward on position
/// convergence, Backward -> Done on feature convergence.
PlacementState placement_step(const PlacementState& state, const Eigen::Ref<const Eigen::VectorXd>& feature_err,
                              const Vec2& pos_err, const SwitchThresholds& thresholds, long tick);

}  // namespace viki
