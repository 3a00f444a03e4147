#include "mgs/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgs::coverage {

namespace {

// Lipschitz bounds are floored so accuracy requests stay finite.
constexpr double kLipFloor = 1e-12;

std::vector<int> sorted_order(const Vec& x) {
  std::vector<int> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x(a) < x(b); });
  return order;
}

double midpoint(double a, double b) { return 0.5 * (a + b); }

// Integral of 2|x - y| over [lo, hi].
double segment_cost(double x, double lo, double hi) {
  if (x <= lo) return (hi - x) * (hi - x) - (lo - x) * (lo - x);
  if (x < hi) return (hi - x) * (hi - x) + (x - lo) * (x - lo);
  return (x - lo) * (x - lo) - (x - hi) * (x - hi);
}

// Derivative of segment_cost in x with the segment held fixed.
double segment_slope(double x, double lo, double hi) {
  if (x <= lo) return -2.0 * (hi - lo);
  if (x < hi) return 2.0 * (x - lo) - 2.0 * (hi - x);
  return 2.0 * (hi - lo);
}

// Calls fn(bin, agent, lo, hi) for every nonempty intersection of a bin with
// an agent's nearest-point cell.
template <typename Fn>
void for_each_segment(const CoverageProblem& prob, const Vec& x, Fn&& fn) {
  const auto order = sorted_order(x);
  const int n = static_cast<int>(order.size());
  const int kbins = prob.bins();
  for (int k = 0; k < kbins; ++k) {
    const double a = prob.bin_edges(k);
    const double b = prob.bin_edges(k + 1);
    for (int j = 0; j < n; ++j) {
      const double cell_lo = j == 0 ? -INFINITY : midpoint(x(order[j - 1]), x(order[j]));
      const double cell_hi = j + 1 == n ? INFINITY : midpoint(x(order[j]), x(order[j + 1]));
      const double lo = std::max(a, cell_lo);
      const double hi = std::min(b, cell_hi);
      if (hi > lo) fn(k, order[j], lo, hi);
    }
  }
}

void check_x(const CoverageProblem& prob, const Vec& x) {
  if (x.size() != prob.n_agents) throw std::invalid_argument("coverage: x has the wrong number of agents");
}

class CoverageOracle final : public ProblemOracle {
 public:
  explicit CoverageOracle(CoverageProblem prob) : prob_(std::move(prob)) { validate(prob_); }

  int dim() const override { return prob_.n_agents; }
  int theta_dim() const override { return prob_.bins(); }

  double eval_F(const Vec& x, const Vec& theta) const override { return cost(prob_, x, theta); }
  Vec grad_x_F(const Vec& x, const Vec& theta) const override { return grad_x(prob_, x, theta); }

  InnerMaxResult inner_max(const Vec& x, double /*dist_tol*/) const override {
    return {inner_lp_max(prob_, c_vector(prob_, x)), 0.0};
  }

  double lip_F_theta(const Vec& x) const override { return std::max(c_vector(prob_, x).norm(), kLipFloor); }

  double lip_gradF_theta(const Vec& x) const override {
    // The Jacobian exists off D as a one-sided limit; it still bounds the
    // variation of J^T theta.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(prob_.bins(), prob_.n_agents);
    for_each_segment(prob_, x, [&](int k, int agent, double lo, double hi) {
      jac(k, agent) += segment_slope(x(agent), lo, hi);
    });
    return std::max(jac.norm(), kLipFloor);
  }

  bool in_D(const Vec& x) const override { return coverage::in_D(prob_, x); }
  bool exact() const override { return true; }

 private:
  CoverageProblem prob_;
};

}  // namespace

Vec CoverageProblem::widths() const {
  return bin_edges.tail(bin_edges.size() - 1) - bin_edges.head(bin_edges.size() - 1);
}

void validate(const CoverageProblem& prob) {
  if (prob.n_agents < 1) throw std::invalid_argument("coverage: n_agents must be >= 1");
  if (prob.bin_edges.size() < 2) throw std::invalid_argument("coverage: need at least two bin edges");
  if (!prob.bin_edges.allFinite()) throw std::invalid_argument("coverage: bin edges must be finite");
  const int k = prob.bins();
  for (int i = 0; i < k; ++i) {
    if (!(prob.bin_edges(i + 1) > prob.bin_edges(i))) {
      throw std::invalid_argument("coverage: bin edges must be strictly increasing");
    }
  }
  if (prob.theta_lower.size() != k || prob.theta_upper.size() != k) {
    throw std::invalid_argument("coverage: theta bounds must have one entry per bin");
  }
  for (int i = 0; i < k; ++i) {
    if (!(prob.theta_lower(i) >= 0.0) || !(prob.theta_upper(i) >= prob.theta_lower(i)) ||
        !std::isfinite(prob.theta_upper(i))) {
      throw std::invalid_argument("coverage: need 0 <= theta_lower <= theta_upper (bin " + std::to_string(i) + ")");
    }
  }
  if (!(prob.total_mass > 0.0)) throw std::invalid_argument("coverage: total_mass must be positive");
  if (!(prob.penalty_weight > 0.0)) throw std::invalid_argument("coverage: penalty_weight must be positive");
  const Vec w = prob.widths();
  const double lo = prob.theta_lower.dot(w);
  const double hi = prob.theta_upper.dot(w);
  const double slack = 1e-12 * std::max(1.0, prob.total_mass);
  if (lo > prob.total_mass + slack || hi < prob.total_mass - slack) {
    throw std::invalid_argument("coverage: infeasible bounds, total_mass outside [sum lower, sum upper]");
  }
}

Vec c_vector(const CoverageProblem& prob, const Vec& x) {
  check_x(prob, x);
  Vec c = Vec::Zero(prob.bins());
  for_each_segment(prob, x, [&](int k, int agent, double lo, double hi) { c(k) += segment_cost(x(agent), lo, hi); });
  return c;
}

Eigen::MatrixXd c_jacobian(const CoverageProblem& prob, const Vec& x) {
  check_x(prob, x);
  if (!in_D(prob, x)) throw std::domain_error("coverage: Jacobian requested outside D");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(prob.bins(), prob.n_agents);
  for_each_segment(prob, x, [&](int k, int agent, double lo, double hi) {
    jac(k, agent) += segment_slope(x(agent), lo, hi);
  });
  return jac;
}

double penalty(const CoverageProblem& prob, const Vec& x) {
  const double lo = prob.domain_lo();
  const double hi = prob.domain_hi();
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) total += std::max({0.0, lo - x(i), x(i) - hi});
  return total;
}

double cost(const CoverageProblem& prob, const Vec& x, const Vec& theta) {
  double value = c_vector(prob, x).dot(theta);
  if (prob.penalty_enabled) value += prob.penalty_weight * penalty(prob, x);
  return value;
}

Vec grad_x(const CoverageProblem& prob, const Vec& x, const Vec& theta) {
  Vec g = c_jacobian(prob, x).transpose() * theta;
  if (prob.penalty_enabled) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) < prob.domain_lo()) g(i) -= prob.penalty_weight;
      if (x(i) > prob.domain_hi()) g(i) += prob.penalty_weight;
    }
  }
  return g;
}

Vec inner_lp_max(const CoverageProblem& prob, const Vec& c) {
  const int k = prob.bins();
  if (c.size() != k) throw std::invalid_argument("inner_lp_max: c has the wrong size");
  const Vec w = prob.widths();
  Vec theta = prob.theta_lower;
  double residual = prob.total_mass - prob.theta_lower.dot(w);
  const double slack = 1e-12 * std::max(1.0, prob.total_mass);
  if (residual < -slack || prob.theta_upper.dot(w) < prob.total_mass - slack) {
    throw std::invalid_argument("inner_lp_max: infeasible bounds");
  }

  // Mass m_k = theta_k * width_k earns c_k / width_k per unit.
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return c(a) / w(a) > c(b) / w(b); });
  for (int i : order) {
    if (residual <= 0.0) break;
    const double room = (prob.theta_upper(i) - prob.theta_lower(i)) * w(i);
    if (room >= residual) {
      theta(i) += residual / w(i);
      residual = 0.0;
    } else {
      theta(i) = prob.theta_upper(i);
      residual -= room;
    }
  }
  return theta;
}

bool in_D(const CoverageProblem& prob, const Vec& x) {
  if (x.size() != prob.n_agents || !x.allFinite()) return false;
  const auto order = sorted_order(x);
  const auto& edges = prob.bin_edges;
  auto on_edge = [&](double v) {
    for (Eigen::Index e = 0; e < edges.size(); ++e) {
      if (v == edges(e)) return true;
    }
    return false;
  };
  for (std::size_t j = 0; j < order.size(); ++j) {
    const double xj = x(order[j]);
    if (on_edge(xj)) return false;
    if (j + 1 < order.size()) {
      const double next = x(order[j + 1]);
      if (next == xj) return false;
      if (on_edge(midpoint(xj, next))) return false;
    }
  }
  // Penalty kinks sit on the domain endpoints, which are bin edges already.
  return true;
}

CoverageProblem two_agent_problem(const TwoAgentBounds& bounds) {
  CoverageProblem prob;
  prob.n_agents = 2;
  prob.bin_edges = Vec{{0.0, 2.0, 4.0}};
  prob.theta_lower = Vec{{bounds.lower[0], bounds.lower[1]}};
  prob.theta_upper = Vec{{bounds.upper[0], bounds.upper[1]}};
  prob.total_mass = 1.0;
  return prob;
}

double two_agent_cost(const TwoAgentBounds& bounds, const Vec& x) {
  if (x.size() != 2 || !(x(0) >= 0.0 && x(0) <= 2.0 && x(1) >= 2.0 && x(1) <= 4.0)) {
    throw std::invalid_argument("two_agent_cost: x must lie in [0,2] x [2,4]");
  }
  const Vec p = c_vector(two_agent_problem(bounds), x);
  // theta_1 + theta_2 = 0.5 on width-2 bins with unit mass.
  const double theta1_min = std::max(bounds.lower[0], 0.5 - bounds.upper[1]);
  const double theta1_max = std::min(bounds.upper[0], 0.5 - bounds.lower[1]);
  const double theta1 = p(0) <= p(1) ? theta1_min : theta1_max;
  return theta1 * p(0) + (0.5 - theta1) * p(1);
}

OraclePtr make_oracle(CoverageProblem prob) { return std::make_shared<CoverageOracle>(std::move(prob)); }

}  // namespace mgs::coverage
