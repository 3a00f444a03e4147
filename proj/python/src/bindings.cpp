#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mgs/coverage.hpp"
#include "mgs/experiment.hpp"
#include "mgs/minnorm.hpp"
#include "mgs/mgs.hpp"
#include "mgs/testfns.hpp"

namespace py = pybind11;
using namespace mgs;

namespace {

// pybind11 holders cannot point at const objects.
struct Oracle {
  OraclePtr ptr;
};

Vec checked(const Oracle& o, const Vec& x) {
  if (x.size() != o.ptr->dim()) throw py::value_error("x has the wrong dimension");
  return x;
}

py::dict trace_arrays(const Trace& t) {
  const auto n = t.records.size();
  const auto dim = n ? t.records.front().x.size() : 0;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), dim);
  Vec f(n), eps(n), nu(n), g(n), step(n);
  std::vector<int> k(n);
  std::vector<std::string> kind(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = t.records[i];
    const auto row = static_cast<Eigen::Index>(i);
    x.row(row) = r.x.transpose();
    f(row) = r.f_approx;
    eps(row) = r.eps;
    nu(row) = r.nu;
    g(row) = r.g_norm;
    step(row) = r.t;
    k[i] = r.k;
    kind[i] = to_string(r.step_kind);
  }
  py::dict d;
  d["k"] = k;
  d["x"] = x;
  d["f"] = f;
  d["eps"] = eps;
  d["nu"] = nu;
  d["g_norm"] = g;
  d["t"] = step;
  d["step_kind"] = kind;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Modified gradient sampling for f(x) = max_theta F(x, theta).";

  py::class_<GsParams>(m, "GsParams")
      .def(py::init<>())
      .def_readwrite("alpha", &GsParams::alpha)
      .def_readwrite("beta", &GsParams::beta)
      .def_readwrite("gamma", &GsParams::gamma)
      .def_readwrite("eps1", &GsParams::eps1)
      .def_readwrite("nu1", &GsParams::nu1)
      .def_readwrite("mu", &GsParams::mu)
      .def_readwrite("vartheta", &GsParams::vartheta)
      .def_readwrite("m", &GsParams::m)
      .def_readwrite("delta1", &GsParams::delta1)
      .def_readwrite("delta_decay", &GsParams::delta_decay)
      .def_readwrite("t_init_factor", &GsParams::t_init_factor)
      .def_readwrite("max_iters", &GsParams::max_iters)
      .def_readwrite("eps_min", &GsParams::eps_min)
      .def_readwrite("nu_min", &GsParams::nu_min)
      .def_property(
          "on_nonsmooth_sample", [](const GsParams& p) { return to_string(p.on_nonsmooth_sample); },
          [](GsParams& p, const std::string& s) { p.on_nonsmooth_sample = nonsmooth_policy_from_string(s); })
      .def("validate", [](const GsParams& p, int n) { return validate_params(p, n); }, py::arg("n"));

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("k", &IterationRecord::k)
      .def_readonly("x", &IterationRecord::x)
      .def_readonly("f", &IterationRecord::f_approx)
      .def_readonly("eps", &IterationRecord::eps)
      .def_readonly("nu", &IterationRecord::nu)
      .def_readonly("g_norm", &IterationRecord::g_norm)
      .def_readonly("t", &IterationRecord::t)
      .def_property_readonly("step_kind", [](const IterationRecord& r) { return to_string(r.step_kind); })
      .def_readonly("sample_count", &IterationRecord::sample_count);

  py::class_<Trace>(m, "Trace")
      .def_readonly("records", &Trace::records)
      .def_readonly("seed", &Trace::seed)
      .def_property_readonly("termination", [](const Trace& t) { return to_string(t.termination); })
      .def_property_readonly("exact_values", [](const Trace& t) { return t.value_mode == ValueMode::ExactOracle; })
      .def_property_readonly("final", [](const Trace& t) -> const IterationRecord& { return t.final_record(); },
                             py::return_value_policy::reference_internal)
      .def("arrays", &trace_arrays, "Columns of the trace as numpy arrays.")
      .def("to_csv", [](const Trace& t) {
        std::ostringstream os;
        write_trace_csv(t, t.records.empty() ? 0 : static_cast<int>(t.records.front().x.size()), os);
        return os.str();
      })
      .def("__len__", [](const Trace& t) { return t.records.size(); });

  py::class_<MinNormResult>(m, "MinNormResult")
      .def_readonly("point", &MinNormResult::point)
      .def_readonly("weights", &MinNormResult::weights)
      .def_readonly("gap", &MinNormResult::gap)
      .def_readonly("iterations", &MinNormResult::iterations)
      .def_readonly("capped", &MinNormResult::capped);

  m.def("min_norm_point", &min_norm_point, py::arg("points"), py::arg("tol") = 1e-12,
        "Least-norm element of the convex hull of the points (Wolfe's method).");
  m.def("min_norm_bruteforce", &min_norm_bruteforce, py::arg("points"), py::arg("grid_resolution"));

  py::class_<Oracle>(m, "Oracle")
      .def_property_readonly("dim", [](const Oracle& o) { return o.ptr->dim(); })
      .def_property_readonly("theta_dim", [](const Oracle& o) { return o.ptr->theta_dim(); })
      .def("value", [](const Oracle& o, const Vec& x) { return o.ptr->value(checked(o, x), 0.0); }, py::arg("x"))
      .def(
          "inner_max", [](const Oracle& o, const Vec& x) { return o.ptr->inner_max(checked(o, x), 0.0).theta; },
          py::arg("x"))
      .def("F", [](const Oracle& o, const Vec& x, const Vec& th) { return o.ptr->eval_F(checked(o, x), th); },
           py::arg("x"), py::arg("theta"))
      .def("grad_x", [](const Oracle& o, const Vec& x, const Vec& th) { return o.ptr->grad_x_F(checked(o, x), th); },
           py::arg("x"), py::arg("theta"))
      .def("in_D", [](const Oracle& o, const Vec& x) { return o.ptr->in_D(checked(o, x)); }, py::arg("x"));

  py::class_<coverage::CoverageProblem>(m, "CoverageProblem")
      .def(py::init([](int n_agents, const Vec& bin_edges, const Vec& theta_lower, const Vec& theta_upper,
                       double total_mass, bool penalty_enabled, double penalty_weight) {
             coverage::CoverageProblem p{n_agents, bin_edges, theta_lower, theta_upper,
                                         total_mass, penalty_enabled, penalty_weight};
             coverage::validate(p);
             return p;
           }),
           py::arg("n_agents"), py::arg("bin_edges"), py::arg("theta_lower"), py::arg("theta_upper"),
           py::arg("total_mass") = 1.0, py::arg("penalty_enabled") = false, py::arg("penalty_weight") = 1.0)
      .def_readonly("n_agents", &coverage::CoverageProblem::n_agents)
      .def_readonly("bin_edges", &coverage::CoverageProblem::bin_edges)
      .def_readonly("theta_lower", &coverage::CoverageProblem::theta_lower)
      .def_readonly("theta_upper", &coverage::CoverageProblem::theta_upper)
      .def_readonly("total_mass", &coverage::CoverageProblem::total_mass)
      .def_readonly("penalty_enabled", &coverage::CoverageProblem::penalty_enabled);

  m.def("two_agent_problem", [] { return coverage::two_agent_problem({}); },
        "Bins [0,2], [2,4], unit mass, theta in [0, 0.45]^2.");
  m.def("coverage_c", &coverage::c_vector, py::arg("problem"), py::arg("x"));
  m.def("coverage_grad", &coverage::grad_x, py::arg("problem"), py::arg("x"), py::arg("theta"));
  m.def("coverage_cost", &coverage::cost, py::arg("problem"), py::arg("x"), py::arg("theta"));
  m.def("coverage_penalty", &coverage::penalty, py::arg("problem"), py::arg("x"));
  m.def("coverage_in_D", &coverage::in_D, py::arg("problem"), py::arg("x"));
  m.def("inner_lp_max", &coverage::inner_lp_max, py::arg("problem"), py::arg("c"));
  m.def(
      "two_agent_cost",
      [](const Vec& x, std::array<double, 2> lower, std::array<double, 2> upper) {
        return coverage::two_agent_cost({lower, upper}, x);
      },
      py::arg("x"), py::arg("lower") = std::array<double, 2>{0.0, 0.0},
      py::arg("upper") = std::array<double, 2>{0.45, 0.45});

  m.def("coverage_oracle", [](const coverage::CoverageProblem& p) { return Oracle{coverage::make_oracle(p)}; });
  m.def("abs_oracle", [] { return Oracle{testfns::finite_max_oracle(testfns::abs_problem())}; });
  m.def(
      "finite_max_oracle",
      [](const std::vector<Vec>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) throw py::value_error("a and b must have the same length");
        testfns::FiniteMaxProblem p;
        for (std::size_t i = 0; i < a.size(); ++i) p.pieces.push_back({a[i], b[i], std::nullopt});
        testfns::validate(p);
        return Oracle{testfns::finite_max_oracle(p)};
      },
      py::arg("a"), py::arg("b"), "max_i <a_i, x> + b_i");
  m.def("cantor_oracle", [](int depth) { return Oracle{testfns::cantor_stress_oracle(depth)}; },
        py::arg("depth") = 6);

  m.def(
      "run",
      [](const Oracle& o, const GsParams& p, const Vec& x1, std::uint64_t seed) {
        py::gil_scoped_release nogil;
        return run(*o.ptr, p, x1, seed);
      },
      py::arg("oracle"), py::arg("params"), py::arg("x1"), py::arg("seed") = 0);
  m.def(
      "gradient_descent_baseline",
      [](const Oracle& o, const GsParams& p, const Vec& x1) {
        py::gil_scoped_release nogil;
        return gradient_descent_baseline(*o.ptr, p, x1);
      },
      py::arg("oracle"), py::arg("params"), py::arg("x1"));

  m.def(
      "run_config",
      [](const std::filesystem::path& path, std::optional<std::filesystem::path> output_dir) {
        auto cfg = load_config(path);
        if (output_dir) cfg.output_dir = *output_dir;
        py::gil_scoped_release nogil;
        return run_experiment(cfg).trace;
      },
      py::arg("path"), py::arg("output_dir") = py::none(),
      "Runs an experiment config, writes its artifacts, and returns the mGS trace.");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
