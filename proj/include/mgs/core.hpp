#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mgs {

using Vec = Eigen::VectorXd;

/// Result of an approximate inner maximization over the parameter set.
struct InnerMaxResult {
  Vec theta;
  /// Certified distance bound to the argmax set; 0 for exact oracles.
  double achieved_dist = 0.0;
};

/// Access to f(x) = max_theta F(x, theta) through F, its x-gradient, and an
/// inner maximizer with controlled accuracy.
///
/// Implementations must be pure and reentrant: the driver may evaluate the
/// sampled bundle from several threads against one shared oracle.
class ProblemOracle {
 public:
  virtual ~ProblemOracle() = default;

  virtual int dim() const = 0;
  virtual int theta_dim() const = 0;

  virtual double eval_F(const Vec& x, const Vec& theta) const = 0;
  /// Defined only for x in the smooth set (see in_D).
  virtual Vec grad_x_F(const Vec& x, const Vec& theta) const = 0;
  /// Returns theta with dist(theta, argmax F(x, .)) <= dist_tol.
  virtual InnerMaxResult inner_max(const Vec& x, double dist_tol) const = 0;

  /// Lipschitz constant of theta -> F(x, theta).
  virtual double lip_F_theta(const Vec& x) const = 0;
  /// Lipschitz constant of theta -> grad_x F(x, theta).
  virtual double lip_gradF_theta(const Vec& x) const = 0;

  /// Membership in the open full-measure set where every F(., theta) is C^2.
  virtual bool in_D(const Vec& x) const = 0;

  /// True when inner_max always reports achieved_dist == 0.
  virtual bool exact() const { return false; }

  /// f(x) through the inner oracle at the given accuracy.
  double value(const Vec& x, double dist_tol = 0.0) const {
    return eval_F(x, inner_max(x, dist_tol).theta);
  }
};

using OraclePtr = std::shared_ptr<const ProblemOracle>;

enum class NonsmoothPolicy { Stop, Resample };

struct GsParams {
  double alpha = 0.1;
  double beta = 0.5;
  double gamma = 0.5;
  double eps1 = 0.2;
  double nu1 = 0.1;
  double mu = 0.5;
  double vartheta = 0.5;
  /// Sample count per iteration; 0 selects n + 2.
  int m = 0;
  double delta1 = 1e-3;
  double delta_decay = 0.95;
  double t_init_factor = 1.0 / 3.0;
  int max_iters = 5000;
  double eps_min = 0.0;
  double nu_min = 0.0;
  NonsmoothPolicy on_nonsmooth_sample = NonsmoothPolicy::Stop;

  int sample_count(int n) const { return m > 0 ? m : n + 2; }
  /// delta_k = delta1 * delta_decay^(k-1), k >= 1.
  double delta(int k) const;
};

/// Returns the list of violated constraints; empty means valid.
std::vector<std::string> validate_params(const GsParams& p, int n);

/// Throws std::invalid_argument listing every violation.
void require_valid_params(const GsParams& p, int n);

struct GsState {
  int k = 1;
  Vec x;
  double eps = 0.0;
  double nu = 0.0;
  /// Number of tolerance discounts so far: eps = eps1 * mu^a, nu = nu1 * vartheta^a.
  int discounts = 0;

  static GsState initial(const GsParams& p, Vec x1);
};

enum class StepKind { Descent, NullTolerance, NullLineSearch, Terminal };

struct IterationRecord {
  int k = 0;
  Vec x;
  double f_approx = 0.0;
  double eps = 0.0;
  double nu = 0.0;
  double g_norm = 0.0;
  double t = 0.0;
  StepKind step_kind = StepKind::Terminal;
  int sample_count = 0;
  std::int64_t wall_time_us = 0;
};

enum class Termination {
  MaxIters,
  TolerancesReached,
  NonsmoothSampleStop,
  Stalled,
  LeftDomain,
};

/// How f_approx was computed in the records.
enum class ValueMode { ExactOracle, DeltaAccurate };

struct Trace {
  std::vector<IterationRecord> records;
  GsParams params_snapshot;
  std::uint64_t seed = 0;
  Termination termination = Termination::MaxIters;
  ValueMode value_mode = ValueMode::ExactOracle;

  const IterationRecord& final_record() const { return records.back(); }
};

std::string to_string(StepKind kind);
std::string to_string(Termination t);
std::string to_string(NonsmoothPolicy p);
StepKind step_kind_from_string(const std::string& s);
Termination termination_from_string(const std::string& s);
NonsmoothPolicy nonsmooth_policy_from_string(const std::string& s);

/// Distance certificate sqrt(2 * gap / rho) earned by a value-gap certificate
/// on a rho-strongly concave inner problem.
double accuracy_to_distance(double value_gap, double strong_concavity_rho);

/// Largest regularization weight 2 * epsilon / max ||theta||^2 keeping the
/// regularized max within epsilon of f.
double regularization_rho(double epsilon, double theta_max_norm_sq);

}  // namespace mgs
