#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "viki/metrics.hpp"
#include "viki/simulator.hpp"

namespace viki {

/// Header line of the run log, in column order.
const std::string& log_header();

/// CSV with the fixed column order of log_header(); floats use 9
/// significant digits so identical runs give identical bytes.
void write_log(std::ostream& out, const std::vector<LogRecord>& log);
void write_log(const std::filesystem::path& path, const std::vector<LogRecord>& log);

/// Throws IoError on malformed rows.
std::vector<LogRecord> read_log(std::istream& in);
std::vector<LogRecord> read_log(const std::filesystem::path& path);

/// "t,detected,u0,v0,u2,v2" rows.
void write_trace(const std::filesystem::path& path, const std::vector<DetectionSample>& trace);
std::vector<DetectionSample> read_trace(const std::filesystem::path& path);

/// One "key value" pair per line.
void write_metrics(std::ostream& out, const RunMetrics& m);
void write_metrics(const std::filesystem::path& path, const RunMetrics& m);

std::string format_number(double value);

}  // namespace viki
