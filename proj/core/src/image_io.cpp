#include "viki/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "viki/error.hpp"

namespace viki {

void write_depth_pgm(const std::filesystem::path& path, const DepthImage& depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << depth.width << ' ' << depth.height << "\n65535\n";
  std::string bytes;
  bytes.reserve(depth.data.size() * 2);
  for (float value : depth.data) {
    const double mm = std::clamp(std::round(static_cast<double>(value) * 1000.0), 0.0, 65535.0);
    const auto word = static_cast<std::uint16_t>(mm);
    bytes.push_back(static_cast<char>(word >> 8));
    bytes.push_back(static_cast<char>(word & 0xff));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

DepthImage read_depth_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (magic != "P5" || width <= 0 || height <= 0 || maxval != 65535) {
    throw Error(ErrorCode::IoError, "not a 16-bit binary PGM: " + path.string());
  }
  in.get();
  DepthImage depth(width, height);
  std::string bytes(depth.data.size() * 2, '\0');
  if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::IoError, "truncated PGM: " + path.string());
  }
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    const auto hi = static_cast<unsigned char>(bytes[2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[2 * i + 1]);
    depth.data[i] = static_cast<float>((hi << 8 | lo) / 1000.0);
  }
  return depth;
}

PointCloud read_cloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  PointCloud cloud;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Vec3 p;
    std::string extra;
    if (!(fields >> p.x() >> p.y() >> p.z()) || (fields >> extra)) {
      throw Error(ErrorCode::IoError, path.string() + ":" + std::to_string(line_no) + ": expected 'x y z'");
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  char buf[96];
  for (const auto& p : cloud.points) {
    std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

}  // namespace viki
