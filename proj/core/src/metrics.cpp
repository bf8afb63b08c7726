#include "viki/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "viki/error.hpp"

namespace viki {

RunMetrics compute_metrics(std::span<const LogRecord> log, const Vec2& target) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "log has no rows");
  RunMetrics m;
  const LogRecord& last = log.back();
  m.final_err_x = std::abs(last.x_true - target.x());
  m.final_err_y = std::abs(last.y_true - target.y());

  const auto n = log.size();
  const auto window = std::max<std::size_t>(1, (n + 9) / 10);
  for (std::size_t i = n - window; i < n; ++i) {
    const double ex = log[i].x_true - target.x();
    const double ey = log[i].y_true - target.y();
    m.mse_x += ex * ex;
    m.mse_y += ey * ey;
  }
  m.mse_x /= static_cast<double>(window);
  m.mse_y /= static_cast<double>(window);

  bool active = false;
  for (const auto& row : log) {
    active = active || row.c == 1;
    if (active && row.stage != Stage::Done && std::abs(row.v_cmd) < 1e-9) ++m.zero_velocity_ticks;
  }
  m.converged = last.stage == Stage::Done;
  return m;
}

namespace {

std::span<const LogRecord> tail_of(std::span<const LogRecord> log, double tail) {
  const auto count = static_cast<std::size_t>(std::ceil(tail * static_cast<double>(log.size())));
  return log.subspan(log.size() - std::min(count, log.size()));
}

double peak_twist(std::span<const LogRecord> log) {
  double peak = 0.0;
  for (const auto& row : log) peak = std::max(peak, row.cam_twist_norm);
  return peak;
}

}  // namespace

bool twist_converged(std::span<const LogRecord> log, double ratio, double tail) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "log has no rows");
  const auto window = tail_of(log, tail);
  double sum = 0.0;
  long count = 0;
  for (const auto& row : window) {
    if (row.c != 1) continue;
    sum += row.cam_twist_norm;
    ++count;
  }
  return count > 0 && sum / static_cast<double>(count) < ratio * peak_twist(log);
}

double tail_min_twist_ratio(std::span<const LogRecord> log, double tail) {
  if (log.empty()) throw Error(ErrorCode::EmptyLog, "log has no rows");
  const double peak = peak_twist(log);
  if (peak <= 0.0) return 0.0;
  double low = peak;
  for (const auto& row : tail_of(log, tail)) {
    if (row.c == 1) low = std::min(low, row.cam_twist_norm);
  }
  return low / peak;
}

}  // namespace viki
