#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mgs/core.hpp"
#include "mgs/coverage.hpp"
#include "mgs/testfns.hpp"

namespace mgs {

/// Malformed or inconsistent experiment configuration. The message names the
/// offending field (or line and column for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CantorSpec {
  int depth = 6;
};

using ProblemSpec = std::variant<coverage::CoverageProblem, testfns::FiniteMaxProblem, CantorSpec>;

struct ExperimentConfig {
  ProblemSpec problem;
  GsParams params;
  Vec x1;
  std::uint64_t seed = 0;
  bool run_baseline_gd = false;
  std::filesystem::path output_dir = "out";
  bool write_csv = true;
  bool write_json = false;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

OraclePtr make_oracle(const ProblemSpec& spec);

/// Header k,x_0..x_{n-1},f,eps,nu,g_norm,t,step_kind; doubles with 17
/// significant digits.
void write_trace_csv(const Trace& trace, int n, std::ostream& os);

struct TraceTable {
  int n = 0;
  std::vector<IterationRecord> records;
};

/// Parses write_trace_csv output; throws std::runtime_error on malformed input.
TraceTable read_trace_csv(std::istream& is);

std::string trace_to_json(const Trace& trace);

/// Whitespace-separated columns: k x_0..x_{n-1} f g_norm eps nu, with a
/// leading '#' header line.
void write_plot_data(const TraceTable& table, std::ostream& os);

struct ExperimentResult {
  Trace trace;
  std::optional<Trace> baseline;
  double wall_time_s = 0.0;
};

/// Runs mGS (and optionally the baseline) and writes trace and summary files
/// into config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Process exit code for a finished experiment: 2 on a nonsmooth-sample stop,
/// 0 otherwise.
int exit_code(const ExperimentResult& result);

/// Converts a trace CSV into plot data; returns 0 on success, 1 on malformed input.
int emit_plot_data(const std::filesystem::path& trace_path, const std::filesystem::path& out_path,
                   std::string* error = nullptr);

}  // namespace mgs
