#pragma once

#include <span>

#include "viki/geometry.hpp"
#include "viki/simulator.hpp"

namespace viki {

struct RunMetrics {
  double final_err_x = 0.0;  // m, |X_true - target|
  double final_err_y = 0.0;
  double mse_x = 0.0;        // m^2, final 10% of ticks
  double mse_y = 0.0;
  long zero_velocity_ticks = 0;
  bool converged = false;
  double iteration_time_mean_ms = 0.0;
};

/// Zero-velocity ticks are counted from the first tick with c = 1 on and
/// exclude Done. Throws EmptyLog.
RunMetrics compute_metrics(std::span<const LogRecord> log, const Vec2& target);

/// Twist-norm convergence test: mean over the visual-servo ticks in the
/// final `tail` fraction of the log below `ratio` times the run's peak.
bool twist_converged(std::span<const LogRecord> log, double ratio = 0.02, double tail = 0.25);

/// Smallest visual-servo twist norm over the final `tail` fraction relative
/// to the peak.
double tail_min_twist_ratio(std::span<const LogRecord> log, double tail = 0.25);

}  // namespace viki
