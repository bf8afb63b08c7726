#include "viki/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "viki/scenario.hpp"

namespace viki {

namespace {

double hit_box(const ObjectBox& box, const Vec3& o, const Vec3& d) {
  const Vec3 lo = box.center - 0.5 * box.extents;
  const Vec3 hi = box.center + 0.5 * box.extents;
  double t_near = 0.0;
  double t_far = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (o[i] < lo[i] || o[i] > hi[i]) return 0.0;
      continue;
    }
    double t0 = (lo[i] - o[i]) / d[i];
    double t1 = (hi[i] - o[i]) / d[i];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return 0.0;
  }
  return t_near > 0.0 ? t_near : 0.0;
}

}  // namespace

double ray_cast(const Scene& scene, const Vec3& origin, const Vec3& dir, double max_range) {
  double best = 0.0;
  if (dir.z() < 0.0 && origin.z() > 0.0) best = -origin.z() / dir.z();
  const double box = hit_box(scene.object, origin, dir);
  if (box > 0.0 && (best == 0.0 || box < best)) best = box;
  return best <= max_range ? best : 0.0;
}

RangeImage lidar_scan(const Scene& scene, const RigidTransform& world_T_lidar, const LidarMount& lidar,
                      double az_min, double az_max) {
  const int cols = lidar.columns();
  const double step = 2.0 * std::numbers::pi / cols;
  RangeImage ri(lidar.elevations(), cols, -std::numbers::pi + 0.5 * step, step);
  const Vec3 origin = world_T_lidar.translation;
  for (int r = 0; r < ri.rows; ++r) {
    const double el = ri.row_elevations[static_cast<std::size_t>(r)];
    for (int c = 0; c < cols; ++c) {
      const double az = ri.azimuth(c);
      if (az < az_min || az > az_max) continue;
      const Vec3 dir_l(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
      ri.at(r, c) = static_cast<float>(ray_cast(scene, origin, world_T_lidar.rotation * dir_l, lidar.max_range));
    }
  }
  return ri;
}

void render_depth(const Scene& scene, const RigidTransform& world_T_camera, const CameraIntrinsics& K,
                  double max_range, const PixelRect& region, DepthImage& out) {
  const Vec3 origin = world_T_camera.translation;
  const int u_begin = std::max(region.u_begin, 0);
  const int v_begin = std::max(region.v_begin, 0);
  const int u_end = std::min(region.u_end, out.width);
  const int v_end = std::min(region.v_end, out.height);
  for (int v = v_begin; v < v_end; ++v) {
    for (int u = u_begin; u < u_end; ++u) {
      const Vec3 ray = back_project_ray({u + 0.5, v + 0.5}, K);
      const double norm = ray.norm();
      const double t = ray_cast(scene, origin, world_T_camera.rotation * (ray / norm), max_range);
      out.at(u, v) = static_cast<float>(t / norm);
    }
  }
}

DepthImage render_depth(const Scene& scene, const RigidTransform& world_T_camera, const CameraIntrinsics& K,
                        double max_range) {
  DepthImage out(K.width, K.height);
  render_depth(scene, world_T_camera, K, max_range, {0, 0, K.width, K.height}, out);
  return out;
}

}  // namespace viki
