#include "viki/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "viki/error.hpp"

namespace viki {

namespace {

struct Panel {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double px(double v) const { return x + (v - xmin) / (xmax - xmin) * w; }
  double py(double v) const { return y + h - (v - ymin) / (ymax - ymin) * h; }
};

void widen(double& lo, double& hi) {
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

std::string polyline(const Panel& p, const std::vector<LogRecord>& log,
                     const std::function<double(const LogRecord&)>& fx,
                     const std::function<double(const LogRecord&)>& fy, const char* color) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : log) {
    const double a = fx(r);
    const double b = fy(r);
    if (std::isfinite(a) && std::isfinite(b)) s << p.px(a) << ',' << p.py(b) << ' ';
  }
  s << "\"/>\n";
  return s.str();
}

std::string frame(const Panel& p, const std::string& title, const std::string& xlabel) {
  std::ostringstream s;
  s << "<rect x=\"" << p.x << "\" y=\"" << p.y << "\" width=\"" << p.w << "\" height=\"" << p.h
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  s << "<text x=\"" << p.x + p.w / 2 << "\" y=\"" << p.y - 8 << "\" text-anchor=\"middle\">" << title << "</text>\n";
  s << "<text x=\"" << p.x + p.w / 2 << "\" y=\"" << p.y + p.h + 32 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  s << "<text x=\"" << p.x << "\" y=\"" << p.y + p.h + 16 << "\">" << p.xmin << "</text>\n";
  s << "<text x=\"" << p.x + p.w << "\" y=\"" << p.y + p.h + 16 << "\" text-anchor=\"end\">" << p.xmax
    << "</text>\n";
  s << "<text x=\"" << p.x - 4 << "\" y=\"" << p.y + p.h << "\" text-anchor=\"end\">" << p.ymin << "</text>\n";
  s << "<text x=\"" << p.x - 4 << "\" y=\"" << p.y + 10 << "\" text-anchor=\"end\">" << p.ymax << "</text>\n";
  return s.str();
}

}  // namespace

void write_plot_svg(const std::filesystem::path& path, const std::vector<LogRecord>& log) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "nothing to plot");
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  double c_lo = x_lo;
  double c_hi = -x_lo;
  for (const auto& r : log) {
    for (double x : {r.x_true, r.x}) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
    for (double y : {r.y_true, r.y}) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
    for (double c : {r.v_cmd, r.psi_cmd}) c_lo = std::min(c_lo, c), c_hi = std::max(c_hi, c);
  }
  // Equal axis scale for the trajectory.
  const double span = std::max(x_hi - x_lo, y_hi - y_lo);
  const double xc = 0.5 * (x_lo + x_hi);
  const double yc = 0.5 * (y_lo + y_hi);
  x_lo = xc - span / 2;
  x_hi = xc + span / 2;
  y_lo = yc - span / 2;
  y_hi = yc + span / 2;
  widen(x_lo, x_hi);
  widen(y_lo, y_hi);
  widen(c_lo, c_hi);
  double t_lo = log.front().t;
  double t_hi = log.back().t;
  if (!(t_lo < t_hi)) t_hi = t_lo + 1.0;

  const Panel traj{60, 40, 400, 400, x_lo, x_hi, y_lo, y_hi};
  const Panel cmd{540, 40, 500, 400, t_lo, t_hi, c_lo, c_hi};

  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1080\" height=\"500\" font-family=\"sans-serif\" "
         "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << frame(traj, "trajectory (true: blue, odometry: orange)", "X [m]");
  out << polyline(traj, log, [](const LogRecord& r) { return r.x_true; },
                  [](const LogRecord& r) { return r.y_true; }, "#1f77b4");
  out << polyline(traj, log, [](const LogRecord& r) { return r.x; }, [](const LogRecord& r) { return r.y; },
                  "#ff7f0e");
  out << frame(cmd, "commands (velocity m/s: blue, steering rad: green)", "t [s]");
  if (cmd.ymin < 0.0 && cmd.ymax > 0.0) {
    out << "<line x1=\"" << cmd.x << "\" x2=\"" << cmd.x + cmd.w << "\" y1=\"" << cmd.py(0.0) << "\" y2=\""
        << cmd.py(0.0) << "\" stroke=\"#bbb\"/>\n";
  }
  out << polyline(cmd, log, [](const LogRecord& r) { return r.t; }, [](const LogRecord& r) { return r.v_cmd; },
                  "#1f77b4");
  out << polyline(cmd, log, [](const LogRecord& r) { return r.t; },
                  [](const LogRecord& r) { return r.psi_cmd; }, "#2ca02c");
  out << "</svg>\n";
}

}  // namespace viki
