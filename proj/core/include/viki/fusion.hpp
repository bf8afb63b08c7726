#pragma once

#include <cstdint>
#include <vector>

#include "viki/camera.hpp"
#include "viki/geometry.hpp"

namespace viki {

struct PointCloud {
  std::vector<Vec3> points;
};

/// LiDAR returns indexed by beam (row) and azimuth bin (column). A range of
/// 0 means no return. Row elevations are ascending.
struct RangeImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> row_elevations;  // rad
  double azimuth_start = 0.0;          // rad, centre of column 0
  double azimuth_step = 0.0;           // rad
  std::vector<float> ranges;           // row-major, m

  RangeImage() = default;
  RangeImage(std::vector<double> elevations, int columns, double az_start, double az_step);

  float& at(int row, int col) { return ranges[static_cast<std::size_t>(row) * cols + col]; }
  float at(int row, int col) const { return ranges[static_cast<std::size_t>(row) * cols + col]; }
  double azimuth(int col) const { return azimuth_start + col * azimuth_step; }
};

/// Metric raster aligned with a camera image; 0 = unknown. Indexed (u, v).
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0f) {}

  float& at(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
  float at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
  bool same_shape(const DepthImage& o) const { return width == o.width && height == o.height; }
};

struct BlindSpotMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BlindSpotMask() = default;
  BlindSpotMask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
  std::uint8_t at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
};

/// Half-open pixel rectangle [u_begin, u_end) x [v_begin, v_end).
struct PixelRect {
  int u_begin = 0;
  int v_begin = 0;
  int u_end = 0;
  int v_end = 0;

  bool empty() const { return u_begin >= u_end || v_begin >= v_end; }
};

enum class DepthSource { Forward, Backward };

/// Pixel containing a continuous image point; false when the point is not
/// strictly inside (0, W) x (0, H).
bool pixel_of(const PixelPoint& px, const CameraIntrinsics& K, int& col, int& row);

/// Projects LiDAR points into the camera. Each hit pixel stores the point's
/// Euclidean range from the camera centre; the nearest range wins.
DepthImage project_cloud_to_depth(const PointCloud& cloud, const RigidTransform& cam_T_lidar,
                                  const CameraIntrinsics& K);

/// Same as project_cloud_to_depth, writing into an existing image (which is
/// cleared first).
void project_cloud_into(const PointCloud& cloud, const RigidTransform& cam_T_lidar,
                        const CameraIntrinsics& K, DepthImage& out);

/// Adds virtual beams by linear interpolation in (elevation, range) between
/// consecutive valid returns of each column. Cells bracketed by a missing
/// return stay 0. Output elevations are evenly spaced between the first and
/// last input elevation.
RangeImage interpolate_range_image(const RangeImage& ri, int target_rows);

PointCloud range_to_cloud(const RangeImage& ri);

/// Bins a cloud into a range image with the given layout (nearest beam
/// elevation, nearest azimuth column; nearest range wins). Points farther
/// than half a beam spacing from every beam are dropped.
RangeImage cloud_to_range_image(const PointCloud& cloud, const std::vector<double>& elevations,
                                int cols, double azimuth_start, double azimuth_step);

struct BlindSpotParams {
  double radius = 4.1052;          // m
  double ground_height = -1.10;    // m, ground plane z in the LiDAR frame
  double step = 0.001;             // m
  double sample_half_extent = 4.11;  // m
};

/// Marks the image pixels of the ground disk the LiDAR cannot observe.
BlindSpotMask blind_spot_mask(const CameraIntrinsics& K, const RigidTransform& cam_T_lidar,
                              const BlindSpotParams& params);

/// LiDAR depth outside the mask, camera depth inside. Throws DimensionMismatch.
DepthImage fuse_depth(const DepthImage& lidar, const DepthImage& camera, const BlindSpotMask& mask);

/// fuse_depth restricted to `region`; pixels outside it are left untouched in `out`.
void fuse_depth_region(const DepthImage& lidar, const DepthImage& camera, const BlindSpotMask& mask,
                       const PixelRect& region, DepthImage& out);

const DepthImage& select_depth_source(DepthSource source, const DepthImage& fused,
                                      const DepthImage& rear);

}  // namespace viki
