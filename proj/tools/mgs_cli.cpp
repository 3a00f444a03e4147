// Experiment runner:
//   mgs run <config.json> [--out DIR] [--seed N] [--max-iters N]
//   mgs plot-data <trace.csv> <out.dat>
// Exit codes: 0 success, 1 config or I/O error, 2 nonsmooth-sample stop.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mgs/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gradient sampling for min-max objectives with inexact inner oracles"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
  run_cmd->add_option("--seed", seed, "RNG seed (overrides config)");
  run_cmd->add_option("--max-iters", max_iters, "Iteration limit (overrides config)")->check(CLI::NonNegativeNumber);

  std::string trace_path;
  std::string plot_path;
  auto* plot_cmd = app.add_subcommand("plot-data", "Convert trace.csv into whitespace-separated plot data");
  plot_cmd->add_option("trace", trace_path, "Trace CSV")->required();
  plot_cmd->add_option("out", plot_path, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*run_cmd) {
    try {
      auto config = mgs::load_config(config_path);
      if (out_dir) config.output_dir = *out_dir;
      if (seed) config.seed = *seed;
      if (max_iters) config.params.max_iters = *max_iters;
      const auto result = mgs::run_experiment(config);
      const auto& last = result.trace.final_record();
      std::cout << "termination: " << mgs::to_string(result.trace.termination) << "\n"
                << "iterations:  " << result.trace.records.size() - 1 << "\n"
                << "final f:     " << last.f_approx << "\n"
                << "output:      " << config.output_dir.string() << "\n";
      return mgs::exit_code(result);
    } catch (const mgs::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  std::string error;
  const int rc = mgs::emit_plot_data(trace_path, plot_path, &error);
  if (rc != 0) std::cerr << "error: " << error << '\n';
  return rc;
}
