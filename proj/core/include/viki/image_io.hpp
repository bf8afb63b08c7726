#pragma once

#include <filesystem>

#include "viki/fusion.hpp"

namespace viki {

/// Binary 16-bit PGM, depth in millimetres (0 = unknown, clamped at 65535).
void write_depth_pgm(const std::filesystem::path& path, const DepthImage& depth);
DepthImage read_depth_pgm(const std::filesystem::path& path);

/// Plain text, one "x y z" point per line in metres. Blank lines and lines
/// starting with '#' are skipped. Throws IoError.
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace viki
