#include "mgs/mgs.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgs/minnorm.hpp"

namespace mgs {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start).count();
}

// Resample attempts per offending point before giving up.
constexpr int kMaxResample = 10000;

double record_value(const ProblemOracle& oracle, const Vec& x, double delta_k) {
  return oracle.value(x, oracle.exact() ? 0.0 : delta_k);
}

IterationRecord terminal_record(const ProblemOracle& oracle, const GsState& s, double delta_k) {
  IterationRecord r;
  r.k = s.k;
  r.x = s.x;
  r.f_approx = record_value(oracle, s.x, delta_k);
  r.eps = s.eps;
  r.nu = s.nu;
  r.g_norm = std::numeric_limits<double>::quiet_NaN();
  r.t = 0.0;
  r.step_kind = StepKind::Terminal;
  r.sample_count = 0;
  return r;
}

void check_start(const ProblemOracle& oracle, const Vec& x1) {
  if (x1.size() != oracle.dim()) throw std::invalid_argument("x1 dimension does not match the problem");
  if (!x1.allFinite()) throw std::invalid_argument("x1 must be finite");
}

bool tolerances_reached(const GsState& s, const GsParams& p) {
  // Underflow to zero ends the run as well; a zero radius cannot be sampled.
  return (s.eps <= p.eps_min && s.nu <= p.nu_min) || s.eps == 0.0 || s.nu == 0.0;
}

}  // namespace

std::vector<Vec> sample_ball(const Vec& center, double radius, int count, CounterRng& rng) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("sample_ball: radius must be positive");
  if (count < 1) throw std::invalid_argument("sample_ball: count must be >= 1");
  const auto n = center.size();
  if (n < 1) throw std::invalid_argument("sample_ball: empty center");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec z(n);
    double norm = 0.0;
    // A zero Gaussian vector has probability zero; redraw keeps the law uniform.
    do {
      for (Eigen::Index j = 0; j < n; ++j) z(j) = rng.gaussian();
      norm = z.norm();
    } while (norm == 0.0);
    const double u = rng.uniform();
    const double r = radius * std::pow(u, 1.0 / static_cast<double>(n));
    Vec p = center + (r / norm) * z;
    // Rounding can push a point a few ulps past the sphere.
    const Vec diff = p - center;
    const double dn = diff.norm();
    if (dn > radius) p = center + diff * (radius / dn);
    out.push_back(std::move(p));
  }
  return out;
}

Vec random_unit_direction(int n, CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("random_unit_direction: n must be >= 1");
  Vec z(n);
  double norm = 0.0;
  do {
    for (int j = 0; j < n; ++j) z(j) = rng.gaussian();
    norm = z.norm();
  } while (norm == 0.0);
  return z / norm;
}

std::vector<Vec> build_bundle(const ProblemOracle& oracle, const std::vector<Vec>& samples, double delta_k) {
  if (!(delta_k > 0.0)) throw std::invalid_argument("build_bundle: delta_k must be positive");
  std::vector<Vec> bundle;
  bundle.reserve(samples.size());
  for (const auto& xi : samples) {
    if (!oracle.in_D(xi)) throw std::domain_error("build_bundle: sample outside the smooth set");
    const double tol = delta_k / oracle.lip_gradF_theta(xi);
    const auto inner = oracle.inner_max(xi, tol);
    bundle.push_back(oracle.grad_x_F(xi, inner.theta));
  }
  return bundle;
}

LineSearchOutcome line_search(const ProblemOracle& oracle, const Vec& x, const Vec& d, double g_norm,
                              double eps_k, const GsParams& p) {
  if (std::abs(d.norm() - 1.0) > 1e-12) throw std::invalid_argument("line_search: direction must be a unit vector");
  if (!(g_norm > 0.0)) throw std::invalid_argument("line_search: g_norm must be positive");
  if (!(eps_k > 0.0)) throw std::invalid_argument("line_search: eps_k must be positive");

  const double t_min = p.gamma * eps_k / 3.0;
  const double c = p.gamma * (1.0 - p.alpha) * p.beta * g_norm * eps_k / 3.0;

  LineSearchOutcome out;
  out.theta_at_x = oracle.inner_max(x, c / (4.0 * oracle.lip_F_theta(x))).theta;
  out.f_at_x = oracle.eval_F(x, out.theta_at_x);

  double t = p.t_init_factor * eps_k;
  for (;;) {
    ++out.trials;
    const Vec trial = x + t * d;
    out.theta_at_trial = oracle.inner_max(trial, c / (4.0 * oracle.lip_F_theta(trial))).theta;
    out.f_at_trial = oracle.eval_F(trial, out.theta_at_trial);
    if (out.f_at_trial <= out.f_at_x - p.beta * t * g_norm + c / 2.0) {
      out.t = t;
      out.accepted = true;
      return out;
    }
    if (p.gamma * t < t_min) {
      out.t = 0.0;
      out.accepted = false;
      return out;
    }
    t *= p.gamma;
  }
}

std::optional<StepResult> step(const ProblemOracle& oracle, const GsState& state, const GsParams& p,
                               CounterRng& rng) {
  const auto start = Clock::now();
  const int n = oracle.dim();
  const int m = p.sample_count(n);
  const double delta_k = p.delta(state.k);

  std::vector<Vec> samples;
  samples.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Vec xi = sample_ball(state.x, state.eps, 1, rng).front();
    if (!oracle.in_D(xi)) {
      if (p.on_nonsmooth_sample == NonsmoothPolicy::Stop) return std::nullopt;
      int attempts = 0;
      do {
        if (++attempts > kMaxResample) return std::nullopt;
        xi = sample_ball(state.x, state.eps, 1, rng).front();
      } while (!oracle.in_D(xi));
    }
    samples.push_back(std::move(xi));
  }
  const Vec spare_direction = random_unit_direction(n, rng);

  const auto bundle = build_bundle(oracle, samples, delta_k);
  const auto mn = min_norm_point(bundle);
  const double g_norm = mn.point.norm();

  StepResult out;
  out.next = state;
  out.next.k = state.k + 1;

  IterationRecord& rec = out.record;
  rec.k = state.k;
  rec.x = state.x;
  rec.f_approx = record_value(oracle, state.x, delta_k);
  rec.eps = state.eps;
  rec.nu = state.nu;
  rec.g_norm = g_norm;
  rec.sample_count = m;

  if (g_norm <= state.nu) {
    // Tolerance branch: the spare direction is drawn but t = 0 leaves x unchanged.
    (void)spare_direction;
    out.next.eps = p.mu * state.eps;
    out.next.nu = p.vartheta * state.nu;
    out.next.discounts = state.discounts + 1;
    rec.t = 0.0;
    rec.step_kind = StepKind::NullTolerance;
  } else {
    const Vec d = -mn.point / g_norm;
    const auto ls = line_search(oracle, state.x, d, g_norm, state.eps, p);
    if (ls.accepted) {
      out.next.x = state.x + ls.t * d;
      rec.t = ls.t;
      rec.step_kind = StepKind::Descent;
    } else {
      rec.t = 0.0;
      rec.step_kind = StepKind::NullLineSearch;
    }
  }
  rec.wall_time_us = micros_since(start);
  return out;
}

Trace run(const ProblemOracle& oracle, const GsParams& p, const Vec& x1, CounterRng& rng) {
  require_valid_params(p, oracle.dim());
  check_start(oracle, x1);

  Trace trace;
  trace.params_snapshot = p;
  trace.seed = rng.seed();
  trace.value_mode = oracle.exact() ? ValueMode::ExactOracle : ValueMode::DeltaAccurate;
  trace.termination = Termination::MaxIters;
  trace.records.reserve(static_cast<std::size_t>(p.max_iters) + 1);

  GsState state = GsState::initial(p, x1);
  bool stopped = false;
  for (int iter = 0; iter < p.max_iters; ++iter) {
    if (tolerances_reached(state, p)) {
      trace.termination = Termination::TolerancesReached;
      stopped = true;
      break;
    }
    auto res = step(oracle, state, p, rng);
    if (!res) {
      trace.termination = Termination::NonsmoothSampleStop;
      stopped = true;
      break;
    }
    trace.records.push_back(std::move(res->record));
    state = std::move(res->next);
  }
  if (!stopped && p.max_iters > 0 && tolerances_reached(state, p)) {
    trace.termination = Termination::TolerancesReached;
  }
  trace.records.push_back(terminal_record(oracle, state, p.delta(state.k)));
  return trace;
}

Trace run(const ProblemOracle& oracle, const GsParams& p, const Vec& x1, std::uint64_t seed) {
  CounterRng rng(seed);
  return run(oracle, p, x1, rng);
}

Trace gradient_descent_baseline(const ProblemOracle& oracle, const GsParams& p, const Vec& x1) {
  require_valid_params(p, oracle.dim());
  check_start(oracle, x1);

  Trace trace;
  trace.params_snapshot = p;
  trace.value_mode = oracle.exact() ? ValueMode::ExactOracle : ValueMode::DeltaAccurate;
  trace.termination = Termination::MaxIters;

  GsState state = GsState::initial(p, x1);
  int stall = 0;
  for (int iter = 0; iter < p.max_iters; ++iter) {
    if (!oracle.in_D(state.x)) {
      trace.termination = Termination::LeftDomain;
      break;
    }
    const auto start = Clock::now();
    const double delta_k = p.delta(state.k);
    const auto inner = oracle.inner_max(state.x, delta_k);
    const Vec grad = oracle.grad_x_F(state.x, inner.theta);
    const double g_norm = grad.norm();

    IterationRecord rec;
    rec.k = state.k;
    rec.x = state.x;
    rec.f_approx = record_value(oracle, state.x, delta_k);
    rec.eps = state.eps;
    rec.nu = state.nu;
    rec.g_norm = g_norm;
    rec.sample_count = 0;
    rec.step_kind = StepKind::NullLineSearch;

    if (g_norm > 0.0) {
      const Vec d = -grad / g_norm;
      const auto ls = line_search(oracle, state.x, d, g_norm, state.eps, p);
      if (ls.accepted) {
        state.x = state.x + ls.t * d;
        rec.t = ls.t;
        rec.step_kind = StepKind::Descent;
      }
    }
    rec.wall_time_us = micros_since(start);
    trace.records.push_back(std::move(rec));
    ++state.k;

    stall = trace.records.back().step_kind == StepKind::Descent ? 0 : stall + 1;
    if (stall >= kBaselineMaxStall) {
      trace.termination = Termination::Stalled;
      break;
    }
  }
  trace.records.push_back(terminal_record(oracle, state, p.delta(state.k)));
  return trace;
}

}  // namespace mgs
