#pragma once

#include <optional>
#include <vector>

#include "mgs/core.hpp"
#include "mgs/rng.hpp"

namespace mgs {

/// Uniform samples on the closed ball B(center, radius).
///
/// Point i consumes n Gaussian draws (direction) followed by one uniform draw
/// (radius u^(1/n)), in index order.
std::vector<Vec> sample_ball(const Vec& center, double radius, int count, CounterRng& rng);

/// Uniform direction on the unit sphere: n Gaussian draws, normalized.
Vec random_unit_direction(int n, CounterRng& rng);

/// Gradients grad_x F(x_i, theta_i) with theta_i from inner_max at accuracy
/// delta_k / lip_gradF_theta(x_i). Throws std::domain_error if a sample is
/// outside the smooth set.
std::vector<Vec> build_bundle(const ProblemOracle& oracle, const std::vector<Vec>& samples, double delta_k);

struct LineSearchOutcome {
  double t = 0.0;
  int trials = 0;
  bool accepted = false;
  Vec theta_at_x;
  Vec theta_at_trial;
  /// F(x, theta_at_x) and F(x + t d, theta_at_trial) of the last trial.
  double f_at_x = 0.0;
  double f_at_trial = 0.0;
};

/// Limited Armijo search along the unit direction d.
///
/// Trials t = t_init_factor * eps_k * gamma^j. A trial is accepted when
///   F(x + t d, theta') <= F(x, theta) - beta t g_norm + c / 2,
/// with c = gamma (1 - alpha) beta g_norm eps_k / 3 and both thetas obtained
/// at accuracy c / (4 L_F^theta). Returns t = 0 once gamma t < gamma eps_k / 3.
LineSearchOutcome line_search(const ProblemOracle& oracle, const Vec& x, const Vec& d, double g_norm,
                              double eps_k, const GsParams& p);

struct StepResult {
  GsState next;
  IterationRecord record;
};

/// One iteration (sampling, bundle, min-norm direction, tolerance update or
/// line search, update). Returns nullopt when a sample leaves the smooth set
/// under NonsmoothPolicy::Stop.
///
/// Draw order per iteration: m ball samples (resampling redraws a point in
/// place), then one direction block of n Gaussians, used only on the
/// tolerance branch.
std::optional<StepResult> step(const ProblemOracle& oracle, const GsState& state, const GsParams& p,
                               CounterRng& rng);

/// Iterates step() from x1 until max_iters, the tolerance thresholds, or a
/// nonsmooth-sample stop. The trace ends with a Terminal record at the final
/// iterate.
Trace run(const ProblemOracle& oracle, const GsParams& p, const Vec& x1, CounterRng& rng);
Trace run(const ProblemOracle& oracle, const GsParams& p, const Vec& x1, std::uint64_t seed);

/// Consecutive zero steps after which the gradient-descent baseline stops.
inline constexpr int kBaselineMaxStall = 25;

/// Normalized gradient descent with the same limited Armijo search and step
/// bounds at the fixed radius eps1. No sampling and no tolerance discounting.
Trace gradient_descent_baseline(const ProblemOracle& oracle, const GsParams& p, const Vec& x1);

}  // namespace mgs
