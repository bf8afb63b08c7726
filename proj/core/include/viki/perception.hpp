#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "viki/camera.hpp"
#include "viki/fusion.hpp"
#include "viki/geometry.hpp"

namespace viki {

/// Axis-aligned image box. (u0, v0) is the minimum corner and (u2, v2) the
/// maximum corner; the remaining two corners follow from them.
struct BoundingBox {
  double u0 = 0.0;
  double v0 = 0.0;
  double u2 = 0.0;
  double v2 = 0.0;

  double width() const { return u2 - u0; }
  double height() const { return v2 - v0; }
  PixelPoint center() const { return {0.5 * (u0 + u2), 0.5 * (v0 + v2)}; }
  bool valid() const { return u0 < u2 && v0 < v2; }

  /// Corners in the order (u0,v0), (u1,v1), (u2,v2), (u3,v3).
  std::vector<PixelPoint> corners() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  bool detected = false;
  BoundingBox bbox;
};

struct ObjectEstimate {
  Vec3 position = Vec3::Zero();  // camera frame
};

/// Failure model of the synthetic detector.
struct DetectorModel {
  double p_miss = 0.0;
  double pixel_noise_sigma = 0.0;
  std::vector<std::pair<double, double>> occlusion_intervals;  // [start, end] s
  std::uint64_t seed = 0;
};

/// World-frame axis-aligned box standing in for the detected object.
struct ObjectBox {
  Vec3 center = Vec3::Zero();
  Vec3 extents = Vec3(0.3, 0.3, 0.4);  // full side lengths, m

  std::vector<Vec3> corners() const;
};

/// Noise-free hull of the projected box, clipped to the image; nullopt when
/// the centre is behind the camera or the hull misses the frame.
std::optional<BoundingBox> project_box(const ObjectBox& object, const RigidTransform& world_T_camera,
                                       const CameraIntrinsics& K);

/// Seeded stand-in for the neural detector. Every call consumes the same
/// number of random draws, so two detectors with equal seeds produce the
/// same miss and noise sequences regardless of what they observe.
class SyntheticDetector {
 public:
  explicit SyntheticDetector(DetectorModel model);

  /// `forced_miss`, when set, replaces the Bernoulli miss trial.
  Detection detect(const ObjectBox& object, const RigidTransform& world_T_camera,
                   const CameraIntrinsics& K, double t, std::optional<bool> forced_miss = std::nullopt);

  const DetectorModel& model() const { return model_; }

 private:
  DetectorModel model_;
  std::mt19937_64 rng_;
};

Detection simulate_detection(const ObjectBox& object, const RigidTransform& world_T_camera,
                             const CameraIntrinsics& K, SyntheticDetector& detector, double t);

/// Insets each side by 20% of the span and rounds half to even; the result
/// is 40% smaller in each linear dimension. Throws EmptyBox.
BoundingBox shrink_bbox(const BoundingBox& bb);

/// Mean of the non-zero depths over the inclusive integer pixel range of
/// `bb`, clipped to the image. Throws NoValidDepth.
double object_depth(const BoundingBox& bb, const DepthImage& depth);

/// Back-projects the box centre at depth `d`. With `range_to_depth` the
/// measurement is treated as a range along the pixel ray. Throws
/// NonPositiveDepth.
ObjectEstimate localize(const PixelPoint& center, double d, const CameraIntrinsics& K,
                        bool range_to_depth = false);

}  // namespace viki
