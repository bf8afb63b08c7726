#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "viki/error.hpp"
#include "viki/log_io.hpp"
#include "viki/metrics.hpp"
#include "viki/plot.hpp"
#include "viki/scenario.hpp"
#include "viki/simulator.hpp"

namespace fs = std::filesystem;
using namespace viki;

namespace {

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("VIKI_SEED"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, std::string("VIKI_SEED is not an integer: ") + env);
    }
  }
  return flag_seed;
}

Vec2 parse_target(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::ConfigError, "--target expects x,y");
  return {parse_quantity(text.substr(0, comma)), parse_quantity(text.substr(comma + 1))};
}

void print_metrics_row(const std::string& mode, std::uint64_t seed, const RunMetrics& m) {
  std::printf("%-12s %6llu %12s %12s %12s %12s %6ld %4d\n", mode.c_str(), static_cast<unsigned long long>(seed),
              format_number(m.final_err_x).c_str(), format_number(m.final_err_y).c_str(),
              format_number(m.mse_x).c_str(), format_number(m.mse_y).c_str(), m.zero_velocity_ticks,
              m.converged ? 1 : 0);
}

RunMetrics metrics_of(const ScenarioConfig& cfg, const RunResult& result) {
  if (result.log.empty()) throw Error(ErrorCode::EmptyLog, "run produced no ticks");
  RunMetrics m = compute_metrics(result.log, ground_truth_target(cfg, result.log.back().theta_true));
  m.iteration_time_mean_ms = result.iteration_time_mean_ms;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid visual/kinematic placement simulator"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string scenario_path;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string mode;
  std::string task;
  std::string trace_path;
  auto* run = app.add_subcommand("run", "Run one closed-loop scenario");
  run->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Random seed (VIKI_SEED overrides)");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--mode", mode, "Controller mode")->check(CLI::IsMember({"viki", "vs-only", "mgbm-static"}));
  run->add_option("--task", task, "Task")->check(CLI::IsMember({"placement", "forward"}));
  run->add_option("--trace", trace_path, "Detection trace to replay")->check(CLI::ExistingFile);

  std::string log_path;
  std::string target;
  auto* metrics = app.add_subcommand("metrics", "Compute metrics of a log");
  metrics->add_option("--log", log_path, "Log CSV")->required()->check(CLI::ExistingFile);
  metrics->add_option("--target", target, "Ground-truth target x,y in metres")->required();

  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Plot trajectory and commands of a log");
  plot->add_option("--log", log_path, "Log CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output SVG file")->required();

  int seeds = 1;
  auto* compare = app.add_subcommand("compare", "Run all modes on shared detection traces");
  compare->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  compare->add_option("--seeds", seeds, "Number of seeds (1..n)")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ScenarioConfig cfg = load_scenario(scenario_path);
      cfg.seed = effective_seed(seed);
      cfg.detector.seed = cfg.seed;
      if (!mode.empty()) cfg.mode = parse_mode(mode);
      if (!task.empty()) cfg.task = parse_task(task);
      finalize(cfg);
      RunOptions options;
      if (!trace_path.empty()) {
        std::vector<bool> detected;
        for (const auto& s : read_trace(trace_path)) detected.push_back(s.detected);
        options.detections = std::move(detected);
      }
      const RunResult result = simulate(cfg, options);
      fs::create_directories(out_dir);
      write_log(fs::path(out_dir) / "log.csv", result.log);
      write_trace(fs::path(out_dir) / "detections.csv", result.trace);
      if (!result.log.empty()) {
        const RunMetrics m = metrics_of(cfg, result);
        write_metrics(fs::path(out_dir) / "metrics.txt", m);
        write_metrics(std::cout, m);
      } else {
        std::cout << "empty log (max_ticks = 0)\n";
      }
    } else if (metrics->parsed()) {
      const auto log = read_log(log_path);
      write_metrics(std::cout, compute_metrics(log, parse_target(target)));
    } else if (plot->parsed()) {
      write_plot_svg(plot_out, read_log(log_path));
    } else if (compare->parsed()) {
      const ScenarioConfig base = load_scenario(scenario_path);
      std::printf("%-12s %6s %12s %12s %12s %12s %6s %4s\n", "mode", "seed", "final_err_X", "final_err_Y", "MSE_X",
                  "MSE_Y", "zero_v", "done");
      const std::uint64_t first = effective_seed(1);
      for (std::uint64_t s = first; s < first + static_cast<std::uint64_t>(seeds); ++s) {
        ScenarioConfig cfg = base;
        cfg.seed = s;
        cfg.detector.seed = s;
        cfg.mode = ControlMode::Viki;
        const RunResult reference = simulate(cfg);
        print_metrics_row("viki", s, metrics_of(cfg, reference));
        RunOptions shared;
        std::vector<bool> detected;
        for (const auto& d : reference.trace) detected.push_back(d.detected);
        shared.detections = std::move(detected);
        for (ControlMode other : {ControlMode::VsOnly, ControlMode::MgbmStatic}) {
          cfg.mode = other;
          print_metrics_row(std::string(to_string(other)), s, metrics_of(cfg, simulate(cfg, shared)));
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
