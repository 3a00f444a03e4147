#include "mgs/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mgs/log.hpp"
#include "mgs/mgs.hpp"

namespace mgs {

namespace {

using nlohmann::json;

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) throw ConfigError(join_path(path, item.key()) + ": unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ConfigError(join_path(path, key) + ": missing required field");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path + ": expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

Vec as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = as_number(v[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

template <typename T, typename Get>
void optional_field(const json& obj, const char* key, const std::string& path, T& target, Get&& get) {
  if (obj.contains(key)) target = get(obj.at(key), join_path(path, key));
}

coverage::CoverageProblem parse_coverage(const json& j, const std::string& path) {
  reject_unknown(j, path,
                 {"type", "n_agents", "bin_edges", "theta_lower", "theta_upper", "total_mass", "penalty_enabled",
                  "penalty_weight"});
  coverage::CoverageProblem p;
  p.n_agents = static_cast<int>(as_integer(require(j, path, "n_agents"), join_path(path, "n_agents")));
  p.bin_edges = as_vector(require(j, path, "bin_edges"), join_path(path, "bin_edges"));
  p.theta_lower = as_vector(require(j, path, "theta_lower"), join_path(path, "theta_lower"));
  p.theta_upper = as_vector(require(j, path, "theta_upper"), join_path(path, "theta_upper"));
  optional_field(j, "total_mass", path, p.total_mass, as_number);
  optional_field(j, "penalty_enabled", path, p.penalty_enabled, as_bool);
  optional_field(j, "penalty_weight", path, p.penalty_weight, as_number);
  try {
    coverage::validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return p;
}

testfns::FiniteMaxProblem parse_finite_max(const json& j, const std::string& path) {
  reject_unknown(j, path, {"type", "pieces"});
  const auto& pieces = require(j, path, "pieces");
  const std::string ppath = join_path(path, "pieces");
  if (!pieces.is_array() || pieces.empty()) throw ConfigError(ppath + ": expected a nonempty array");
  testfns::FiniteMaxProblem p;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string ip = ppath + "[" + std::to_string(i) + "]";
    const auto& item = pieces[i];
    if (!item.is_object()) throw ConfigError(ip + ": expected an object");
    reject_unknown(item, ip, {"a", "b", "Q"});
    testfns::Piece piece;
    piece.a = as_vector(require(item, ip, "a"), ip + ".a");
    optional_field(item, "b", ip, piece.b, as_number);
    if (item.contains("Q")) {
      const auto& rows = item.at("Q");
      if (!rows.is_array()) throw ConfigError(ip + ".Q: expected an array of rows");
      Eigen::MatrixXd q(static_cast<Eigen::Index>(rows.size()), piece.a.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const Vec row = as_vector(rows[r], ip + ".Q[" + std::to_string(r) + "]");
        if (row.size() != piece.a.size()) throw ConfigError(ip + ".Q: row length must equal dim(a)");
        q.row(static_cast<Eigen::Index>(r)) = row.transpose();
      }
      piece.Q = std::move(q);
    }
    p.pieces.push_back(std::move(piece));
  }
  try {
    testfns::validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return p;
}

ProblemSpec parse_problem(const json& j) {
  const std::string path = "problem";
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const std::string type = as_string(require(j, path, "type"), "problem.type");
  if (type == "coverage") return parse_coverage(j, path);
  if (type == "finite_max") return parse_finite_max(j, path);
  if (type == "cantor") {
    reject_unknown(j, path, {"type", "depth"});
    CantorSpec c;
    optional_field(j, "depth", path, c.depth, [](const json& v, const std::string& p) {
      return static_cast<int>(as_integer(v, p));
    });
    if (c.depth < 1 || c.depth > 12) throw ConfigError("problem.depth: must be in [1, 12]");
    return c;
  }
  throw ConfigError("problem.type: expected one of coverage, finite_max, cantor");
}

GsParams parse_params(const json& j) {
  const std::string path = "params";
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  reject_unknown(j, path,
                 {"alpha", "beta", "gamma", "eps1", "nu1", "mu", "vartheta", "m", "delta1", "delta_decay",
                  "t_init_factor", "max_iters", "eps_min", "nu_min", "on_nonsmooth_sample"});
  GsParams p;
  optional_field(j, "alpha", path, p.alpha, as_number);
  optional_field(j, "beta", path, p.beta, as_number);
  optional_field(j, "gamma", path, p.gamma, as_number);
  optional_field(j, "eps1", path, p.eps1, as_number);
  optional_field(j, "nu1", path, p.nu1, as_number);
  optional_field(j, "mu", path, p.mu, as_number);
  optional_field(j, "vartheta", path, p.vartheta, as_number);
  auto as_int = [](const json& v, const std::string& p) { return static_cast<int>(as_integer(v, p)); };
  optional_field(j, "m", path, p.m, as_int);
  optional_field(j, "delta1", path, p.delta1, as_number);
  optional_field(j, "delta_decay", path, p.delta_decay, as_number);
  optional_field(j, "t_init_factor", path, p.t_init_factor, as_number);
  optional_field(j, "max_iters", path, p.max_iters, as_int);
  optional_field(j, "eps_min", path, p.eps_min, as_number);
  optional_field(j, "nu_min", path, p.nu_min, as_number);
  if (j.contains("on_nonsmooth_sample")) {
    const auto s = as_string(j.at("on_nonsmooth_sample"), "params.on_nonsmooth_sample");
    try {
      p.on_nonsmooth_sample = nonsmooth_policy_from_string(s);
    } catch (const std::invalid_argument&) {
      throw ConfigError("params.on_nonsmooth_sample: expected Stop or Resample");
    }
  }
  return p;
}

int problem_dim(const ProblemSpec& spec) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, coverage::CoverageProblem>) return p.n_agents;
        else if constexpr (std::is_same_v<T, testfns::FiniteMaxProblem>) return p.dim();
        else return 1;
      },
      spec);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json params_json(const GsParams& p) {
  return json{{"alpha", p.alpha},
              {"beta", p.beta},
              {"gamma", p.gamma},
              {"eps1", p.eps1},
              {"nu1", p.nu1},
              {"mu", p.mu},
              {"vartheta", p.vartheta},
              {"m", p.m},
              {"delta1", p.delta1},
              {"delta_decay", p.delta_decay},
              {"t_init_factor", p.t_init_factor},
              {"max_iters", p.max_iters},
              {"eps_min", p.eps_min},
              {"nu_min", p.nu_min},
              {"on_nonsmooth_sample", to_string(p.on_nonsmooth_sample)}};
}

json run_summary(const Trace& t) {
  const auto& last = t.final_record();
  return json{{"final_x", vec_json(last.x)},
              {"final_f", last.f_approx},
              {"eps_final", last.eps},
              {"nu_final", last.nu},
              {"iterations", static_cast<int>(t.records.size()) - 1},
              {"termination", to_string(t.termination)}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(j, "", {"problem", "params", "x1", "seed", "run_baseline_gd", "output_dir", "formats"});

  ExperimentConfig cfg;
  cfg.problem = parse_problem(require(j, "", "problem"));
  if (j.contains("params")) cfg.params = parse_params(j.at("params"));
  cfg.x1 = as_vector(require(j, "", "x1"), "x1");
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed: expected a nonnegative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  optional_field(j, "run_baseline_gd", "", cfg.run_baseline_gd, as_bool);
  if (j.contains("output_dir")) cfg.output_dir = as_string(j.at("output_dir"), "output_dir");
  if (j.contains("formats")) {
    const auto& f = j.at("formats");
    if (!f.is_array()) throw ConfigError("formats: expected an array");
    cfg.write_csv = false;
    cfg.write_json = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto s = as_string(f[i], "formats[" + std::to_string(i) + "]");
      if (s == "csv") cfg.write_csv = true;
      else if (s == "json") cfg.write_json = true;
      else throw ConfigError("formats[" + std::to_string(i) + "]: expected csv or json");
    }
    if (!cfg.write_csv && !cfg.write_json) throw ConfigError("formats: select at least one of csv, json");
  }

  const int n = problem_dim(cfg.problem);
  if (cfg.x1.size() != n) {
    throw ConfigError("x1: dimension " + std::to_string(cfg.x1.size()) + " does not match the problem dimension " +
                      std::to_string(n));
  }
  if (!cfg.x1.allFinite()) throw ConfigError("x1: entries must be finite");
  const auto violations = validate_params(cfg.params, n);
  if (!violations.empty()) throw ConfigError("params: " + violations.front());
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

OraclePtr make_oracle(const ProblemSpec& spec) {
  return std::visit(
      [](const auto& p) -> OraclePtr {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, coverage::CoverageProblem>) return coverage::make_oracle(p);
        else if constexpr (std::is_same_v<T, testfns::FiniteMaxProblem>) return testfns::finite_max_oracle(p);
        else return testfns::cantor_stress_oracle(p.depth);
      },
      spec);
}

void write_trace_csv(const Trace& trace, int n, std::ostream& os) {
  os << "k";
  for (int i = 0; i < n; ++i) os << ",x_" << i;
  os << ",f,eps,nu,g_norm,t,step_kind\n";
  for (const auto& r : trace.records) {
    os << r.k;
    for (int i = 0; i < n; ++i) os << ',' << format_double(r.x(i));
    os << ',' << format_double(r.f_approx) << ',' << format_double(r.eps) << ',' << format_double(r.nu) << ','
       << format_double(r.g_norm) << ',' << format_double(r.t) << ',' << to_string(r.step_kind) << '\n';
  }
}

TraceTable read_trace_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("empty trace file");
  const auto cols = split(header, ',');
  const std::vector<std::string> tail{"f", "eps", "nu", "g_norm", "t", "step_kind"};
  if (cols.size() < tail.size() + 2 || cols.front() != "k") throw std::runtime_error("line 1: unexpected header");
  TraceTable table;
  table.n = static_cast<int>(cols.size() - tail.size() - 1);
  for (int i = 0; i < table.n; ++i) {
    if (cols[static_cast<std::size_t>(i) + 1] != "x_" + std::to_string(i)) {
      throw std::runtime_error("line 1: expected column x_" + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (cols[static_cast<std::size_t>(table.n) + 1 + i] != tail[i]) {
      throw std::runtime_error("line 1: expected column " + tail[i]);
    }
  }

  std::string line;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) throw std::runtime_error("line " + std::to_string(lineno) + ": wrong column count");
    IterationRecord r;
    const double k = parse_double(cells[0], lineno);
    if (k != std::floor(k)) throw std::runtime_error("line " + std::to_string(lineno) + ": k must be an integer");
    r.k = static_cast<int>(k);
    r.x.resize(table.n);
    for (int i = 0; i < table.n; ++i) r.x(i) = parse_double(cells[static_cast<std::size_t>(i) + 1], lineno);
    std::size_t c = static_cast<std::size_t>(table.n) + 1;
    r.f_approx = parse_double(cells[c++], lineno);
    r.eps = parse_double(cells[c++], lineno);
    r.nu = parse_double(cells[c++], lineno);
    r.g_norm = parse_double(cells[c++], lineno);
    r.t = parse_double(cells[c++], lineno);
    try {
      r.step_kind = step_kind_from_string(cells[c]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    table.records.push_back(std::move(r));
  }
  return table;
}

std::string trace_to_json(const Trace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back(json{{"k", r.k},
                           {"x", vec_json(r.x)},
                           {"f", r.f_approx},
                           {"eps", r.eps},
                           {"nu", r.nu},
                           {"g_norm", number_or_null(r.g_norm)},
                           {"t", r.t},
                           {"step_kind", to_string(r.step_kind)},
                           {"sample_count", r.sample_count},
                           {"wall_time_us", r.wall_time_us}});
  }
  json j{{"seed", trace.seed},
         {"termination", to_string(trace.termination)},
         {"value_mode", trace.value_mode == ValueMode::ExactOracle ? "exact" : "delta"},
         {"params", params_json(trace.params_snapshot)},
         {"records", std::move(records)}};
  return j.dump(1) + "\n";
}

void write_plot_data(const TraceTable& table, std::ostream& os) {
  os << "# k";
  for (int i = 0; i < table.n; ++i) os << " x_" << i;
  os << " f g_norm eps nu\n";
  for (const auto& r : table.records) {
    os << r.k;
    for (int i = 0; i < table.n; ++i) os << ' ' << format_double(r.x(i));
    os << ' ' << format_double(r.f_approx) << ' ' << format_double(r.g_norm) << ' ' << format_double(r.eps) << ' '
       << format_double(r.nu) << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto oracle = make_oracle(config.problem);
  const int n = oracle->dim();
  const auto start = std::chrono::steady_clock::now();

  ExperimentResult result;
  log::info("running mGS: n = " + std::to_string(n) + ", seed = " + std::to_string(config.seed));
  result.trace = run(*oracle, config.params, config.x1, config.seed);
  log::info("mGS finished: " + to_string(result.trace.termination) + " after " +
            std::to_string(result.trace.records.size() - 1) + " iterations");
  if (config.run_baseline_gd) {
    if (oracle->in_D(config.x1)) {
      result.baseline = gradient_descent_baseline(*oracle, config.params, config.x1);
      log::info("baseline finished: " + to_string(result.baseline->termination));
    } else {
      log::warn("baseline skipped: x1 is outside the smooth set");
    }
  }
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(config.output_dir);
  const auto& dir = config.output_dir;
  if (config.write_csv) {
    std::ostringstream os;
    write_trace_csv(result.trace, n, os);
    write_file(dir / "trace.csv", os.str());
  }
  if (config.write_json) write_file(dir / "trace.json", trace_to_json(result.trace));

  json summary = run_summary(result.trace);
  summary["seed"] = config.seed;
  summary["wall_time_s"] = result.wall_time_s;
  summary["value_mode"] = result.trace.value_mode == ValueMode::ExactOracle ? "exact" : "delta";
  summary["params"] = params_json(config.params);
  if (result.baseline) {
    if (config.write_csv) {
      std::ostringstream os;
      write_trace_csv(*result.baseline, n, os);
      write_file(dir / "baseline_trace.csv", os.str());
    }
    if (config.write_json) write_file(dir / "baseline_trace.json", trace_to_json(*result.baseline));
    json cmp = run_summary(*result.baseline);
    cmp["f_gap"] = result.baseline->final_record().f_approx - result.trace.final_record().f_approx;
    summary["baseline_gd"] = std::move(cmp);
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  log::debug("outputs written to " + dir.string());
  return result;
}

int exit_code(const ExperimentResult& result) {
  return result.trace.termination == Termination::NonsmoothSampleStop ? 2 : 0;
}

int emit_plot_data(const std::filesystem::path& trace_path, const std::filesystem::path& out_path,
                   std::string* error) {
  try {
    std::ifstream is(trace_path, std::ios::binary);
    if (!is) throw std::runtime_error(trace_path.string() + ": cannot open trace");
    const auto table = read_trace_csv(is);
    std::ostringstream os;
    write_plot_data(table, os);
    write_file(out_path, os.str());
    return 0;
  } catch (const std::exception& e) {
    if (error != nullptr) *error = e.what();
    return 1;
  }
}

}  // namespace mgs
