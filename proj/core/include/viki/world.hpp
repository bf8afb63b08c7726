#pragma once

#include <numbers>

#include "viki/camera.hpp"
#include "viki/fusion.hpp"
#include "viki/geometry.hpp"
#include "viki/perception.hpp"

namespace viki {

struct LidarMount;

/// Analytic scene: ground plane z = 0 and one axis-aligned box.
struct Scene {
  ObjectBox object;
};

/// Distance along the unit direction `dir` to the first surface, or 0 when
/// nothing is hit within `max_range`.
double ray_cast(const Scene& scene, const Vec3& origin, const Vec3& dir, double max_range);

/// 16-beam sweep of the scene. Column c looks along azimuth
/// -pi + (c + 1/2) * step, matching range_to_cloud. Columns outside
/// [az_min, az_max] are left at 0.
RangeImage lidar_scan(const Scene& scene, const RigidTransform& world_T_lidar, const LidarMount& lidar,
                      double az_min = -std::numbers::pi, double az_max = std::numbers::pi);

/// Depth-camera rendering (z along the optical axis) of the pixels in
/// `region`, sampled at pixel centres. Pixels beyond `max_range` stay 0.
void render_depth(const Scene& scene, const RigidTransform& world_T_camera, const CameraIntrinsics& K,
                  double max_range, const PixelRect& region, DepthImage& out);

DepthImage render_depth(const Scene& scene, const RigidTransform& world_T_camera, const CameraIntrinsics& K,
                        double max_range);

}  // namespace viki
