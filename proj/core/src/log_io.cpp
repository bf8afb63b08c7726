#include "viki/log_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "viki/error.hpp"

namespace viki {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) fields.push_back(item);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double to_double(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw Error(ErrorCode::IoError, "bad number '" + text + "'");
  return value;
}

long to_long(const std::string& text) {
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0') throw Error(ErrorCode::IoError, "bad integer '" + text + "'");
  return value;
}

Stage stage_from_id(long id) {
  if (id < 1 || id > 4) throw Error(ErrorCode::IoError, "bad state_id " + std::to_string(id));
  return static_cast<Stage>(id);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

const std::string& log_header() {
  static const std::string header = [] {
    std::string h = "tick,t,state_id,c,controller";
    for (int i = 0; i < 4; ++i) h += ",u" + std::to_string(i) + ",v" + std::to_string(i);
    for (int i = 0; i < 4; ++i) h += ",ud" + std::to_string(i) + ",vd" + std::to_string(i);
    h += ",max_feature_err,v_cmd,psi_cmd,omega_cmd,X,Y,theta,X_true,Y_true,theta_true,X_d,Y_d,Z_o,cam_twist_norm";
    return h;
  }();
  return header;
}

void write_log(std::ostream& out, const std::vector<LogRecord>& log) {
  out << log_header() << '\n';
  for (const auto& r : log) {
    std::string line = std::to_string(r.tick) + ',' + format_number(r.t) + ',' +
                       std::to_string(static_cast<int>(r.stage)) + ',' + std::to_string(r.c) + ',' +
                       std::string(to_string(r.controller));
    for (const auto& p : r.features) line += ',' + format_number(p.u) + ',' + format_number(p.v);
    for (const auto& p : r.desired) line += ',' + format_number(p.u) + ',' + format_number(p.v);
    for (double v : {r.max_feature_err, r.v_cmd, r.psi_cmd, r.omega_cmd, r.x, r.y, r.theta, r.x_true, r.y_true,
                     r.theta_true, r.x_d, r.y_d, r.z_o, r.cam_twist_norm}) {
      line += ',' + format_number(v);
    }
    out << line << '\n';
  }
}

void write_log(const std::filesystem::path& path, const std::vector<LogRecord>& log) {
  auto out = open_out(path);
  write_log(out, log);
}

std::vector<LogRecord> read_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "log is missing its header");
  strip_cr(line);
  if (line != log_header()) throw Error(ErrorCode::IoError, "unexpected log header");
  std::vector<LogRecord> log;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 35) throw Error(ErrorCode::IoError, "log row has " + std::to_string(f.size()) + " fields");
    LogRecord r;
    r.tick = to_long(f[0]);
    r.t = to_double(f[1]);
    r.stage = stage_from_id(to_long(f[2]));
    r.c = static_cast<int>(to_long(f[3]));
    try {
      r.controller = parse_controller(f[4]);
    } catch (const Error& e) {
      throw Error(ErrorCode::IoError, e.what());
    }
    for (std::size_t i = 0; i < 4; ++i) {
      r.features[i] = {to_double(f[5 + 2 * i]), to_double(f[6 + 2 * i])};
      r.desired[i] = {to_double(f[13 + 2 * i]), to_double(f[14 + 2 * i])};
    }
    double* dst[] = {&r.max_feature_err, &r.v_cmd, &r.psi_cmd, &r.omega_cmd, &r.x, &r.y, &r.theta,
                     &r.x_true, &r.y_true, &r.theta_true, &r.x_d, &r.y_d, &r.z_o, &r.cam_twist_norm};
    for (std::size_t i = 0; i < std::size(dst); ++i) *dst[i] = to_double(f[21 + i]);
    log.push_back(r);
  }
  return log;
}

std::vector<LogRecord> read_log(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_log(in);
}

void write_trace(const std::filesystem::path& path, const std::vector<DetectionSample>& trace) {
  auto out = open_out(path);
  out << "t,detected,u0,v0,u2,v2\n";
  for (const auto& s : trace) {
    out << format_number(s.t) << ',' << (s.detected ? 1 : 0) << ',' << format_number(s.bbox.u0) << ','
        << format_number(s.bbox.v0) << ',' << format_number(s.bbox.u2) << ',' << format_number(s.bbox.v2) << '\n';
  }
}

std::vector<DetectionSample> read_trace(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "trace is missing its header");
  std::vector<DetectionSample> trace;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw Error(ErrorCode::IoError, "trace row needs 6 fields");
    trace.push_back({to_double(f[0]), to_long(f[1]) != 0,
                     BoundingBox{to_double(f[2]), to_double(f[3]), to_double(f[4]), to_double(f[5])}});
  }
  return trace;
}

void write_metrics(std::ostream& out, const RunMetrics& m) {
  out << "final_err_X " << format_number(m.final_err_x) << '\n'
      << "final_err_Y " << format_number(m.final_err_y) << '\n'
      << "MSE_X " << format_number(m.mse_x) << '\n'
      << "MSE_Y " << format_number(m.mse_y) << '\n'
      << "zero_velocity_ticks " << m.zero_velocity_ticks << '\n'
      << "converged " << (m.converged ? 1 : 0) << '\n'
      << "iteration_time_mean " << format_number(m.iteration_time_mean_ms) << '\n';
}

void write_metrics(const std::filesystem::path& path, const RunMetrics& m) {
  auto out = open_out(path);
  write_metrics(out, m);
}

}  // namespace viki
