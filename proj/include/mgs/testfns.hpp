#pragma once

#include <optional>
#include <vector>

#include "mgs/core.hpp"

namespace mgs::testfns {

/// F(x, i) = 0.5 <x, Q_i x> + <a_i, x> + b_i.
struct Piece {
  Vec a;
  double b = 0.0;
  std::optional<Eigen::MatrixXd> Q;
};

/// f(x) = max_i F(x, i) over a finite index set; theta is the index as a 1-vector.
struct FiniteMaxProblem {
  std::vector<Piece> pieces;
  int dim() const { return pieces.empty() ? 0 : static_cast<int>(pieces.front().a.size()); }
};

void validate(const FiniteMaxProblem& p);

/// max{x, -x} in one dimension.
FiniteMaxProblem abs_problem();

/// Exact enumeration oracle; ties go to the lowest index and x is outside D
/// where two maximal pieces have different gradients.
OraclePtr finite_max_oracle(FiniteMaxProblem p);

/// Smooth odd bump sin(pi u) exp(-1 / (1 - u^2)) on (-1, 1), zero elsewhere.
double bump(double u);
double bump_d1(double u);
double bump_d2(double u);

/// max over [-1, 1] of max(|bump'|, |bump''|).
double bump_derivative_bound();

/// Truncated sup-of-bumps function on [0, 1] built over a Cantor-like set.
///
/// Level k >= 0 holds 2^k closed intervals I_k^m; the open middle interval of
/// length 2^-(2(k+1)) around each midpoint is removed to form level k + 1.
/// Levels 1..depth carry bumps g_k = eps_k * bump((x - x_k^m) / delta_k) on the
/// removed intervals, with delta_k = 2^-(2(k+1)+1) and eps_k = delta_k^2 / (k C).
/// The family f_t blends g_k and g_{k+1} on t in [1/(k+1), 1/k]; theta is
/// (t, k) and the oracle enumerates the segment endpoints plus t = 0.
class CantorStressProblem {
 public:
  explicit CantorStressProblem(int depth);

  int depth() const { return depth_; }
  double C() const { return c_; }

  double delta(int k) const;
  double eps(int k) const;

  /// Intervals I_k^m as (lo, hi) pairs, k in [0, depth].
  const std::vector<std::pair<double, double>>& intervals(int k) const { return intervals_.at(static_cast<std::size_t>(k)); }
  /// Midpoints x_k^m of the removed intervals, k in [1, depth].
  const std::vector<double>& bump_centers(int k) const { return centers_.at(static_cast<std::size_t>(k)); }

  double g(int k, double x) const;
  double g_d1(int k, double x) const;
  double g_d2(int k, double x) const;

  /// f_t written on segment k: ((t - 1/(k+1)) g_k + (1/k - t) g_{k+1}) / (k (k+1)).
  double family(double t, int segment, double x) const;
  double family_d1(double t, int segment, double x) const;

  /// Enumerated (t, segment) grid; the entry with segment 0 is t = 0.
  const std::vector<std::pair<double, int>>& grid() const { return grid_; }

 private:
  template <typename G>
  double eval_bumps(int k, double x, G&& shape, int order) const;

  int depth_;
  double c_;
  std::vector<std::vector<std::pair<double, double>>> intervals_;
  std::vector<std::vector<double>> centers_;
  std::vector<std::pair<double, int>> grid_;
};

OraclePtr cantor_stress_oracle(int depth);

}  // namespace mgs::testfns
