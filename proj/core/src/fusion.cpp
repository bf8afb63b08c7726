#include "viki/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "viki/error.hpp"

namespace viki {

RangeImage::RangeImage(std::vector<double> elevations, int columns, double az_start, double az_step)
    : rows(static_cast<int>(elevations.size())),
      cols(columns),
      row_elevations(std::move(elevations)),
      azimuth_start(az_start),
      azimuth_step(az_step),
      ranges(static_cast<std::size_t>(rows) * columns, 0.0f) {}

bool pixel_of(const PixelPoint& px, const CameraIntrinsics& K, int& col, int& row) {
  if (!(px.u > 0.0 && px.u < K.width && px.v > 0.0 && px.v < K.height)) return false;
  col = static_cast<int>(px.u);
  row = static_cast<int>(px.v);
  return true;
}

DepthImage project_cloud_to_depth(const PointCloud& cloud, const RigidTransform& cam_T_lidar,
                                  const CameraIntrinsics& K) {
  DepthImage out(K.width, K.height);
  project_cloud_into(cloud, cam_T_lidar, K, out);
  return out;
}

void project_cloud_into(const PointCloud& cloud, const RigidTransform& cam_T_lidar,
                        const CameraIntrinsics& K, DepthImage& out) {
  if (out.width != K.width || out.height != K.height) out = DepthImage(K.width, K.height);
  std::fill(out.data.begin(), out.data.end(), 0.0f);
  for (const Vec3& p : cloud.points) {
    const Vec3 pc = transform_point(cam_T_lidar, p);
    if (!(pc.z() > 0.0)) continue;
    const PixelPoint px{K.cu + K.fu * pc.x() / pc.z(), K.cv + K.fv * pc.y() / pc.z()};
    int col = 0;
    int row = 0;
    if (!pixel_of(px, K, col, row)) continue;
    const auto range = static_cast<float>(pc.norm());
    float& cell = out.at(col, row);
    if (cell == 0.0f || range < cell) cell = range;
  }
}

RangeImage interpolate_range_image(const RangeImage& ri, int target_rows) {
  if (ri.rows < 2 || target_rows < 2) {
    throw Error(ErrorCode::DimensionMismatch, "interpolation needs at least two rows");
  }
  const double lo = ri.row_elevations.front();
  const double hi = ri.row_elevations.back();
  std::vector<double> elevations(static_cast<std::size_t>(target_rows));
  for (int r = 0; r < target_rows; ++r) {
    elevations[static_cast<std::size_t>(r)] =
        r == target_rows - 1 ? hi : lo + (hi - lo) * static_cast<double>(r) / (target_rows - 1);
  }
  RangeImage out(elevations, ri.cols, ri.azimuth_start, ri.azimuth_step);

  int lower = 0;
  for (int r = 0; r < target_rows; ++r) {
    const double e = elevations[static_cast<std::size_t>(r)];
    while (lower < ri.rows - 2 && ri.row_elevations[static_cast<std::size_t>(lower) + 1] <= e) ++lower;
    const double e0 = ri.row_elevations[static_cast<std::size_t>(lower)];
    const double e1 = ri.row_elevations[static_cast<std::size_t>(lower) + 1];
    const double t = (e - e0) / (e1 - e0);
    for (int c = 0; c < ri.cols; ++c) {
      const float r0 = ri.at(lower, c);
      const float r1 = ri.at(lower + 1, c);
      float value = 0.0f;
      if (e == e0) {
        value = r0;
      } else if (e == e1) {
        value = r1;
      } else if (r0 > 0.0f && r1 > 0.0f) {
        value = static_cast<float>(r0 + (static_cast<double>(r1) - r0) * t);
      }
      out.at(r, c) = value;
    }
  }
  return out;
}

PointCloud range_to_cloud(const RangeImage& ri) {
  std::vector<double> cos_az(static_cast<std::size_t>(ri.cols));
  std::vector<double> sin_az(static_cast<std::size_t>(ri.cols));
  for (int c = 0; c < ri.cols; ++c) {
    cos_az[static_cast<std::size_t>(c)] = std::cos(ri.azimuth(c));
    sin_az[static_cast<std::size_t>(c)] = std::sin(ri.azimuth(c));
  }
  PointCloud cloud;
  cloud.points.reserve(ri.ranges.size());
  for (int r = 0; r < ri.rows; ++r) {
    const double ce = std::cos(ri.row_elevations[static_cast<std::size_t>(r)]);
    const double se = std::sin(ri.row_elevations[static_cast<std::size_t>(r)]);
    for (int c = 0; c < ri.cols; ++c) {
      const double range = ri.at(r, c);
      if (range == 0.0) continue;
      cloud.points.emplace_back(range * ce * cos_az[static_cast<std::size_t>(c)],
                                range * ce * sin_az[static_cast<std::size_t>(c)], range * se);
    }
  }
  return cloud;
}

RangeImage cloud_to_range_image(const PointCloud& cloud, const std::vector<double>& elevations,
                                int cols, double azimuth_start, double azimuth_step) {
  RangeImage out(elevations, cols, azimuth_start, azimuth_step);
  for (const Vec3& p : cloud.points) {
    const double range = p.norm();
    if (!(range > 0.0)) continue;
    const double elevation = std::atan2(p.z(), std::hypot(p.x(), p.y()));
    int best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int r = 0; r < out.rows; ++r) {
      const double gap = std::abs(elevation - elevations[static_cast<std::size_t>(r)]);
      if (gap < best_gap) {
        best_gap = gap;
        best = r;
      }
    }
    const double spacing = out.rows > 1 ? std::abs(elevations[1] - elevations[0]) : 0.0;
    if (best < 0 || (out.rows > 1 && best_gap > 0.5 * spacing)) continue;
    const double steps = (std::atan2(p.y(), p.x()) - azimuth_start) / azimuth_step;
    long col = std::lround(steps) % cols;
    if (col < 0) col += cols;
    float& cell = out.at(best, static_cast<int>(col));
    const auto value = static_cast<float>(range);
    if (cell == 0.0f || value < cell) cell = value;
  }
  return out;
}

BlindSpotMask blind_spot_mask(const CameraIntrinsics& K, const RigidTransform& cam_T_lidar,
                              const BlindSpotParams& params) {
  if (!(params.step > 0.0)) throw Error(ErrorCode::ConfigError, "mask step must be positive");
  BlindSpotMask mask(K.width, K.height);
  if (!(params.radius > 0.0)) return mask;

  const double extent = params.sample_half_extent;
  const auto n = static_cast<long>(std::llround(2.0 * extent / params.step));
  const double r2 = params.radius * params.radius;
  for (long i = 0; i <= n; ++i) {
    const double x = -extent + static_cast<double>(i) * params.step;
    const double rem = r2 - x * x;
    if (rem < 0.0) continue;
    // Candidate column window from the disk chord, widened by one sample; the
    // exact membership test below decides.
    const double half = std::sqrt(rem);
    const long j_lo = std::max(0L, static_cast<long>(std::floor((-half + extent) / params.step)) - 1);
    const long j_hi = std::min(n, static_cast<long>(std::ceil((half + extent) / params.step)) + 1);
    for (long j = j_lo; j <= j_hi; ++j) {
      const double y = -extent + static_cast<double>(j) * params.step;
      if (x * x + y * y > r2) continue;
      const Vec3 pc = transform_point(cam_T_lidar, Vec3(x, y, params.ground_height));
      if (!(pc.z() > 0.0)) continue;
      const PixelPoint px{K.cu + K.fu * pc.x() / pc.z(), K.cv + K.fv * pc.y() / pc.z()};
      int col = 0;
      int row = 0;
      if (pixel_of(px, K, col, row)) mask.at(col, row) = 1;
    }
  }
  return mask;
}

namespace {

void check_shapes(const DepthImage& lidar, const DepthImage& camera, const BlindSpotMask& mask) {
  if (!lidar.same_shape(camera) || lidar.width != mask.width || lidar.height != mask.height) {
    throw Error(ErrorCode::DimensionMismatch, "fusion inputs differ in size");
  }
}

}  // namespace

DepthImage fuse_depth(const DepthImage& lidar, const DepthImage& camera, const BlindSpotMask& mask) {
  check_shapes(lidar, camera, mask);
  DepthImage out(lidar.width, lidar.height);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = mask.data[i] ? camera.data[i] : lidar.data[i];
  }
  return out;
}

void fuse_depth_region(const DepthImage& lidar, const DepthImage& camera, const BlindSpotMask& mask,
                       const PixelRect& region, DepthImage& out) {
  check_shapes(lidar, camera, mask);
  if (!out.same_shape(lidar)) out = DepthImage(lidar.width, lidar.height);
  const int u0 = std::max(0, region.u_begin);
  const int v0 = std::max(0, region.v_begin);
  const int u1 = std::min(lidar.width, region.u_end);
  const int v1 = std::min(lidar.height, region.v_end);
  for (int v = v0; v < v1; ++v) {
    for (int u = u0; u < u1; ++u) {
      out.at(u, v) = mask.at(u, v) ? camera.at(u, v) : lidar.at(u, v);
    }
  }
}

const DepthImage& select_depth_source(DepthSource source, const DepthImage& fused,
                                      const DepthImage& rear) {
  return source == DepthSource::Forward ? fused : rear;
}

}  // namespace viki
