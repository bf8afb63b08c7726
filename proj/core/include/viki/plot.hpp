#pragma once

#include <filesystem>
#include <vector>

#include "viki/simulator.hpp"

namespace viki {

/// Static SVG figure: top-down trajectory (true and odometry) and the
/// commanded velocity and steering over time.
void write_plot_svg(const std::filesystem::path& path, const std::vector<LogRecord>& log);

}  // namespace viki
