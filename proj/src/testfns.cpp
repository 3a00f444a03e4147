#include "mgs/testfns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mgs::testfns {

namespace {

constexpr double kLipFloor = 1e-12;

int piece_index(const Vec& theta, int count) {
  if (theta.size() != 1) throw std::invalid_argument("finite max: theta must be a 1-vector index");
  const double r = std::round(theta(0));
  if (r < 0.0 || r >= count) throw std::invalid_argument("finite max: theta index out of range");
  return static_cast<int>(r);
}

double piece_value(const Piece& p, const Vec& x) {
  double v = p.a.dot(x) + p.b;
  if (p.Q) v += 0.5 * x.dot(*p.Q * x);
  return v;
}

Vec piece_grad(const Piece& p, const Vec& x) {
  Vec g = p.a;
  if (p.Q) g += *p.Q * x;
  return g;
}

/// Shared enumeration logic: values[i], grads[i] over a finite candidate set.
struct Enumeration {
  std::vector<double> values;
  std::vector<Vec> grads;

  std::size_t argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] > values[best]) best = i;
    }
    return best;
  }

  double value_spread() const {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
  }

  double grad_spread() const {
    double s = 0.0;
    for (std::size_t i = 0; i < grads.size(); ++i) {
      for (std::size_t j = i + 1; j < grads.size(); ++j) s = std::max(s, (grads[i] - grads[j]).norm());
    }
    return s;
  }

  // Two maximal candidates with different gradients mark a kink.
  bool smooth_at() const {
    const double top = values[argmax()];
    const Vec* first = nullptr;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != top) continue;
      if (first == nullptr) {
        first = &grads[i];
      } else if (grads[i] != *first) {
        return false;
      }
    }
    return true;
  }
};

class FiniteMaxOracle final : public ProblemOracle {
 public:
  explicit FiniteMaxOracle(FiniteMaxProblem p) : p_(std::move(p)) { validate(p_); }

  int dim() const override { return p_.dim(); }
  int theta_dim() const override { return 1; }

  double eval_F(const Vec& x, const Vec& theta) const override {
    return piece_value(p_.pieces[static_cast<std::size_t>(piece_index(theta, count()))], x);
  }
  Vec grad_x_F(const Vec& x, const Vec& theta) const override {
    return piece_grad(p_.pieces[static_cast<std::size_t>(piece_index(theta, count()))], x);
  }
  InnerMaxResult inner_max(const Vec& x, double /*dist_tol*/) const override {
    return {Vec::Constant(1, static_cast<double>(enumerate(x).argmax())), 0.0};
  }
  // Distinct indices are at least 1 apart.
  double lip_F_theta(const Vec& x) const override { return enumerate(x).value_spread() + kLipFloor; }
  double lip_gradF_theta(const Vec& x) const override { return enumerate(x).grad_spread() + kLipFloor; }
  bool in_D(const Vec& x) const override { return x.allFinite() && enumerate(x).smooth_at(); }
  bool exact() const override { return true; }

 private:
  int count() const { return static_cast<int>(p_.pieces.size()); }

  Enumeration enumerate(const Vec& x) const {
    if (x.size() != dim()) throw std::invalid_argument("finite max: x has the wrong dimension");
    Enumeration e;
    for (const auto& piece : p_.pieces) {
      e.values.push_back(piece_value(piece, x));
      e.grads.push_back(piece_grad(piece, x));
    }
    return e;
  }

  FiniteMaxProblem p_;
};

// Golden-section refinement of a local maximum of h on [lo, hi].
template <typename H>
double refine_max(H&& h, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
    const double c = b - ratio * (b - a);
    const double d = a + ratio * (b - a);
    if (h(c) > h(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return h(0.5 * (a + b));
}

double compute_derivative_bound() {
  constexpr int kGrid = 400000;
  const double h = 2.0 / kGrid;
  double best = 0.0;
  auto abs_d1 = [](double u) { return std::abs(bump_d1(u)); };
  auto abs_d2 = [](double u) { return std::abs(bump_d2(u)); };
  int best_i = 0;
  bool best_is_d1 = true;
  for (int i = 0; i <= kGrid; ++i) {
    const double u = -1.0 + i * h;
    if (abs_d1(u) > best) {
      best = abs_d1(u);
      best_i = i;
      best_is_d1 = true;
    }
    if (abs_d2(u) > best) {
      best = abs_d2(u);
      best_i = i;
      best_is_d1 = false;
    }
  }
  const double u = -1.0 + best_i * h;
  const double lo = std::max(-1.0, u - h);
  const double hi = std::min(1.0, u + h);
  const double refined = best_is_d1 ? refine_max(abs_d1, lo, hi) : refine_max(abs_d2, lo, hi);
  // Guard against the grid missing the peak by a rounding sliver.
  return std::max(best, refined) * (1.0 + 1e-12);
}

class CantorOracle final : public ProblemOracle {
 public:
  explicit CantorOracle(int depth) : p_(depth) {}

  int dim() const override { return 1; }
  int theta_dim() const override { return 2; }

  double eval_F(const Vec& x, const Vec& theta) const override {
    const auto [t, seg] = unpack(theta);
    return p_.family(t, seg, x(0));
  }
  Vec grad_x_F(const Vec& x, const Vec& theta) const override {
    const auto [t, seg] = unpack(theta);
    return Vec::Constant(1, p_.family_d1(t, seg, x(0)));
  }
  InnerMaxResult inner_max(const Vec& x, double /*dist_tol*/) const override {
    const auto& grid = p_.grid();
    const auto e = enumerate(x);
    const auto& best = grid[e.argmax()];
    return {Vec{{best.first, static_cast<double>(best.second)}}, 0.0};
  }
  double lip_F_theta(const Vec& x) const override { return enumerate(x).value_spread() / min_separation() + kLipFloor; }
  double lip_gradF_theta(const Vec& x) const override {
    return enumerate(x).grad_spread() / min_separation() + kLipFloor;
  }
  bool in_D(const Vec& x) const override { return x.size() == 1 && std::isfinite(x(0)) && enumerate(x).smooth_at(); }
  bool exact() const override { return true; }

 private:
  std::pair<double, int> unpack(const Vec& theta) const {
    if (theta.size() != 2) throw std::invalid_argument("cantor: theta must be (t, segment)");
    return {theta(0), static_cast<int>(std::round(theta(1)))};
  }

  // Closest distinct grid points: (1/k, k) and (1/(k+1), k) at k = depth - 1.
  double min_separation() const {
    const int d = p_.depth();
    if (d < 2) return 1.0;
    return std::min(1.0, 1.0 / (static_cast<double>(d - 1) * d));
  }

  Enumeration enumerate(const Vec& x) const {
    if (x.size() != 1) throw std::invalid_argument("cantor: x must be one-dimensional");
    Enumeration e;
    for (const auto& [t, seg] : p_.grid()) {
      e.values.push_back(p_.family(t, seg, x(0)));
      e.grads.push_back(Vec::Constant(1, p_.family_d1(t, seg, x(0))));
    }
    return e;
  }

  CantorStressProblem p_;
};

}  // namespace

void validate(const FiniteMaxProblem& p) {
  if (p.pieces.empty()) throw std::invalid_argument("finite max: at least one piece required");
  const auto n = p.pieces.front().a.size();
  if (n < 1) throw std::invalid_argument("finite max: pieces need a nonempty linear term");
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    const auto& piece = p.pieces[i];
    const std::string where = " (piece " + std::to_string(i) + ")";
    if (piece.a.size() != n) throw std::invalid_argument("finite max: dimension mismatch" + where);
    if (!piece.a.allFinite() || !std::isfinite(piece.b)) throw std::invalid_argument("finite max: non-finite data" + where);
    if (piece.Q) {
      const auto& q = *piece.Q;
      if (q.rows() != n || q.cols() != n) throw std::invalid_argument("finite max: Q must be n x n" + where);
      if (!q.allFinite() || q != q.transpose()) throw std::invalid_argument("finite max: Q must be symmetric" + where);
    }
  }
}

FiniteMaxProblem abs_problem() {
  FiniteMaxProblem p;
  p.pieces.push_back({Vec::Constant(1, 1.0), 0.0, std::nullopt});
  p.pieces.push_back({Vec::Constant(1, -1.0), 0.0, std::nullopt});
  return p;
}

OraclePtr finite_max_oracle(FiniteMaxProblem p) { return std::make_shared<FiniteMaxOracle>(std::move(p)); }

double bump(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::sin(std::numbers::pi * u) * std::exp(-1.0 / (1.0 - u * u));
}

double bump_d1(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double pi = std::numbers::pi;
  const double s = 1.0 - u * u;
  const double e = std::exp(-1.0 / s);
  const double e1 = -2.0 * u * e / (s * s);
  return pi * std::cos(pi * u) * e + std::sin(pi * u) * e1;
}

double bump_d2(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double pi = std::numbers::pi;
  const double s = 1.0 - u * u;
  const double e = std::exp(-1.0 / s);
  const double e1 = -2.0 * u * e / (s * s);
  const double e2 = e * (4.0 * u * u / (s * s * s * s) - 2.0 / (s * s) - 8.0 * u * u / (s * s * s));
  return -pi * pi * std::sin(pi * u) * e + 2.0 * pi * std::cos(pi * u) * e1 + std::sin(pi * u) * e2;
}

double bump_derivative_bound() {
  static const double bound = compute_derivative_bound();
  return bound;
}

CantorStressProblem::CantorStressProblem(int depth) : depth_(depth), c_(bump_derivative_bound()) {
  if (depth < 1 || depth > 12) throw std::invalid_argument("cantor: depth must be in [1, 12]");
  intervals_.push_back({{0.0, 1.0}});
  centers_.emplace_back();  // level 0 carries no bump
  for (int k = 0; k < depth; ++k) {
    const double half = std::ldexp(1.0, -(2 * (k + 1) + 1));
    std::vector<std::pair<double, double>> next;
    for (const auto& [lo, hi] : intervals_.back()) {
      const double mid = 0.5 * (lo + hi);
      next.emplace_back(lo, mid - half);
      next.emplace_back(mid + half, hi);
    }
    intervals_.push_back(std::move(next));
    std::vector<double> mids;
    for (const auto& [lo, hi] : intervals_.back()) mids.push_back(0.5 * (lo + hi));
    centers_.push_back(std::move(mids));
  }
  grid_.emplace_back(0.0, 0);
  for (int k = 1; k < depth; ++k) {
    grid_.emplace_back(1.0 / k, k);
    grid_.emplace_back(1.0 / (k + 1), k);
  }
}

double CantorStressProblem::delta(int k) const { return std::ldexp(1.0, -(2 * (k + 1) + 1)); }

double CantorStressProblem::eps(int k) const { return delta(k) * delta(k) / (k * c_); }

template <typename G>
double CantorStressProblem::eval_bumps(int k, double x, G&& shape, int order) const {
  if (k < 1 || k > depth_) return 0.0;
  const auto& mids = centers_[static_cast<std::size_t>(k)];
  const double dk = delta(k);
  auto it = std::lower_bound(mids.begin(), mids.end(), x - dk);
  if (it == mids.end() || !(std::abs(x - *it) < dk)) return 0.0;
  return eps(k) / std::pow(dk, order) * shape((x - *it) / dk);
}

double CantorStressProblem::g(int k, double x) const { return eval_bumps(k, x, bump, 0); }
double CantorStressProblem::g_d1(int k, double x) const { return eval_bumps(k, x, bump_d1, 1); }
double CantorStressProblem::g_d2(int k, double x) const { return eval_bumps(k, x, bump_d2, 2); }

double CantorStressProblem::family(double t, int segment, double x) const {
  if (segment == 0) return 0.0;
  const double k = segment;
  const double scale = k * (k + 1.0);
  return ((t - 1.0 / (k + 1.0)) * g(segment, x) + (1.0 / k - t) * g(segment + 1, x)) / scale;
}

double CantorStressProblem::family_d1(double t, int segment, double x) const {
  if (segment == 0) return 0.0;
  const double k = segment;
  const double scale = k * (k + 1.0);
  return ((t - 1.0 / (k + 1.0)) * g_d1(segment, x) + (1.0 / k - t) * g_d1(segment + 1, x)) / scale;
}

OraclePtr cantor_stress_oracle(int depth) { return std::make_shared<CantorOracle>(depth); }

}  // namespace mgs::testfns
