#include "viki/perception.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <limits>

#include "viki/error.hpp"

namespace viki {

namespace {

double round_half_even(double x) {
  const int previous = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double r = std::nearbyint(x);
  std::fesetround(previous);
  return r;
}

bool in_occlusion(const DetectorModel& model, double t) {
  return std::any_of(model.occlusion_intervals.begin(), model.occlusion_intervals.end(),
                     [t](const auto& iv) { return t >= iv.first && t <= iv.second; });
}

}  // namespace

std::vector<PixelPoint> BoundingBox::corners() const {
  return {{u0, v0}, {u0, v2}, {u2, v2}, {u2, v0}};
}

std::vector<Vec3> ObjectBox::corners() const {
  std::vector<Vec3> out;
  out.reserve(8);
  const Vec3 half = 0.5 * extents;
  for (int i = 0; i < 8; ++i) {
    out.emplace_back(center.x() + ((i & 1) ? half.x() : -half.x()),
                     center.y() + ((i & 2) ? half.y() : -half.y()),
                     center.z() + ((i & 4) ? half.z() : -half.z()));
  }
  return out;
}

std::optional<BoundingBox> project_box(const ObjectBox& object, const RigidTransform& world_T_camera,
                                       const CameraIntrinsics& K) {
  const RigidTransform camera_T_world = world_T_camera.inverse();
  if (!(transform_point(camera_T_world, object.center).z() > 0.0)) return std::nullopt;

  constexpr double kNearPlane = 1e-3;
  double umin = std::numeric_limits<double>::infinity();
  double vmin = umin;
  double umax = -umin;
  double vmax = -umin;
  int in_front = 0;
  for (const Vec3& corner : object.corners()) {
    const Vec3 pc = transform_point(camera_T_world, corner);
    if (pc.z() <= kNearPlane) continue;
    ++in_front;
    const PixelPoint px = project(pc, K);
    umin = std::min(umin, px.u);
    umax = std::max(umax, px.u);
    vmin = std::min(vmin, px.v);
    vmax = std::max(vmax, px.v);
  }
  if (in_front == 0) return std::nullopt;
  const double W = K.width - 1;
  const double H = K.height - 1;
  if (umax < 0.0 || vmax < 0.0 || umin > W || vmin > H) return std::nullopt;
  BoundingBox bb{std::clamp(umin, 0.0, W), std::clamp(vmin, 0.0, H), std::clamp(umax, 0.0, W),
                 std::clamp(vmax, 0.0, H)};
  if (!bb.valid()) return std::nullopt;
  return bb;
}

SyntheticDetector::SyntheticDetector(DetectorModel model) : model_(std::move(model)), rng_(model_.seed) {}

Detection SyntheticDetector::detect(const ObjectBox& object, const RigidTransform& world_T_camera,
                                    const CameraIntrinsics& K, double t, std::optional<bool> forced_miss) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double trial = uniform(rng_);
  double noise[4];
  for (double& n : noise) n = gauss(rng_);

  const bool missed = forced_miss ? *forced_miss : trial < model_.p_miss;
  if (missed || in_occlusion(model_, t)) return {};

  const auto hull = project_box(object, world_T_camera, K);
  if (!hull) return {};

  const double s = model_.pixel_noise_sigma;
  double u_a = hull->u0 + s * noise[0];
  double v_a = hull->v0 + s * noise[1];
  double u_b = hull->u2 + s * noise[2];
  double v_b = hull->v2 + s * noise[3];
  const double W = K.width - 1;
  const double H = K.height - 1;
  BoundingBox bb{std::clamp(std::min(u_a, u_b), 0.0, W), std::clamp(std::min(v_a, v_b), 0.0, H),
                 std::clamp(std::max(u_a, u_b), 0.0, W), std::clamp(std::max(v_a, v_b), 0.0, H)};
  if (!bb.valid()) return {};
  return {true, bb};
}

Detection simulate_detection(const ObjectBox& object, const RigidTransform& world_T_camera,
                             const CameraIntrinsics& K, SyntheticDetector& detector, double t) {
  return detector.detect(object, world_T_camera, K, t);
}

BoundingBox shrink_bbox(const BoundingBox& bb) {
  BoundingBox out;
  out.u0 = round_half_even(0.4 * (0.5 * (bb.u2 - bb.u0)) + bb.u0);
  out.u2 = round_half_even(0.4 * (0.5 * (bb.u0 - bb.u2)) + bb.u2);
  out.v0 = round_half_even(0.4 * (0.5 * (bb.v2 - bb.v0)) + bb.v0);
  out.v2 = round_half_even(0.4 * (0.5 * (bb.v0 - bb.v2)) + bb.v2);
  if (out.u0 >= out.u2 || out.v0 >= out.v2) throw Error(ErrorCode::EmptyBox, "shrunk box is empty");
  return out;
}

double object_depth(const BoundingBox& bb, const DepthImage& depth) {
  const int u_lo = std::max(0, static_cast<int>(std::ceil(bb.u0)));
  const int u_hi = std::min(depth.width - 1, static_cast<int>(std::floor(bb.u2)));
  const int v_lo = std::max(0, static_cast<int>(std::ceil(bb.v0)));
  const int v_hi = std::min(depth.height - 1, static_cast<int>(std::floor(bb.v2)));
  double sum = 0.0;
  std::size_t n = 0;
  for (int v = v_lo; v <= v_hi; ++v) {
    for (int u = u_lo; u <= u_hi; ++u) {
      const float d = depth.at(u, v);
      if (d != 0.0f) {
        sum += d;
        ++n;
      }
    }
  }
  if (n == 0) throw Error(ErrorCode::NoValidDepth, "no non-zero depth inside the box");
  return sum / static_cast<double>(n);
}

ObjectEstimate localize(const PixelPoint& center, double d, const CameraIntrinsics& K, bool range_to_depth) {
  if (!(d > 0.0)) throw Error(ErrorCode::NonPositiveDepth, "object depth must be positive");
  double Z = d;
  if (range_to_depth) Z = d / back_project_ray(center, K).norm();
  return {Vec3((center.u - K.cu) * Z / K.fu, (center.v - K.cv) * Z / K.fv, Z)};
}

}  // namespace viki
