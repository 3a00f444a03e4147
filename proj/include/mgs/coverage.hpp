#pragma once

#include <array>

#include "mgs/core.hpp"

namespace mgs::coverage {

/// Distributionally robust coverage of a histogram density on the line.
///
/// Bin k spans [bin_edges[k], bin_edges[k+1]] and carries density theta_k with
/// theta_lower <= theta <= theta_upper and sum_k theta_k * width_k = total_mass.
struct CoverageProblem {
  int n_agents = 1;
  Vec bin_edges;
  Vec theta_lower;
  Vec theta_upper;
  double total_mass = 1.0;
  bool penalty_enabled = false;
  double penalty_weight = 1.0;

  int bins() const { return static_cast<int>(bin_edges.size()) - 1; }
  Vec widths() const;
  double domain_lo() const { return bin_edges(0); }
  double domain_hi() const { return bin_edges(bin_edges.size() - 1); }
};

/// Throws std::invalid_argument if the problem is malformed or Theta is empty.
void validate(const CoverageProblem& prob);

/// c_k(x) = integral over bin k of 2 * min_n |x_n - y| dy.
Vec c_vector(const CoverageProblem& prob, const Vec& x);

/// Jacobian dc_k/dx_n (K x N). Requires x in D.
Eigen::MatrixXd c_jacobian(const CoverageProblem& prob, const Vec& x);

/// Sum over agents of the hinge distance outside [first edge, last edge].
double penalty(const CoverageProblem& prob, const Vec& x);

/// <c(x), theta> plus the weighted penalty when enabled.
double cost(const CoverageProblem& prob, const Vec& x, const Vec& theta);

/// Gradient of cost() in x. Throws std::domain_error when x is not in D.
Vec grad_x(const CoverageProblem& prob, const Vec& x, const Vec& theta);

/// Exact maximizer of <c, theta> over Theta (greedy fill by c_k / width_k,
/// lowest index first on ties).
Vec inner_lp_max(const CoverageProblem& prob, const Vec& c);

/// Distinct positions, no agent on a bin edge, and no midpoint of sorted
/// neighbours on a bin edge; exact comparisons.
bool in_D(const CoverageProblem& prob, const Vec& x);

struct TwoAgentBounds {
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{0.45, 0.45};
};

/// The two-agent problem on bins [0,2], [2,4] with unit mass.
CoverageProblem two_agent_problem(const TwoAgentBounds& bounds);

/// Closed-form worst-case cost for two agents with x in [0,2] x [2,4].
double two_agent_cost(const TwoAgentBounds& bounds, const Vec& x);

/// Oracle for cost() with the exact LP inner maximizer.
OraclePtr make_oracle(CoverageProblem prob);

}  // namespace mgs::coverage
