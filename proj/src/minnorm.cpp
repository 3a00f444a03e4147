#include "mgs/minnorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace mgs {

namespace {

void check_points(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("min_norm_point: empty point set");
  const auto n = points.front().size();
  if (n == 0) throw std::invalid_argument("min_norm_point: zero-dimensional points");
  for (const auto& p : points) {
    if (p.size() != n) throw std::invalid_argument("min_norm_point: dimension mismatch");
    if (!p.allFinite()) throw std::invalid_argument("min_norm_point: non-finite coordinate");
  }
}

bool bitwise_equal(const Vec& a, const Vec& b) {
  return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

/// Minimizer of ||sum v_i q_i|| subject to sum v_i = 1 over the corral.
Vec affine_minimizer(const std::vector<const Vec*>& corral) {
  const auto s = static_cast<Eigen::Index>(corral.size());
  Vec v(s);
  if (s == 1) {
    v(0) = 1.0;
    return v;
  }
  const Vec& base = *corral.front();
  Eigen::MatrixXd diffs(base.size(), s - 1);
  for (Eigen::Index i = 1; i < s; ++i) diffs.col(i - 1) = *corral[i] - base;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Vec u = svd.solve(-base);
  v(0) = 1.0 - u.sum();
  v.tail(s - 1) = u;
  return v;
}

}  // namespace

MinNormResult min_norm_point(const std::vector<Vec>& points, double tol) {
  check_points(points);
  if (!(tol > 0.0)) throw std::invalid_argument("min_norm_point: tol must be positive");

  // Unique points, each mapped back to its first occurrence.
  std::vector<Vec> uniq;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool dup = std::any_of(uniq.begin(), uniq.end(),
                                 [&](const Vec& q) { return bitwise_equal(q, points[i]); });
    if (!dup) {
      uniq.push_back(points[i]);
      origin.push_back(i);
    }
  }

  const int cap = 64 * static_cast<int>(points.size());
  std::size_t start = 0;
  for (std::size_t i = 1; i < uniq.size(); ++i) {
    if (uniq[i].squaredNorm() < uniq[start].squaredNorm()) start = i;
  }

  std::vector<std::size_t> corral{start};
  std::vector<double> w{1.0};
  Vec x = uniq[start];

  auto combine = [&] {
    Vec y = Vec::Zero(x.size());
    for (std::size_t i = 0; i < corral.size(); ++i) y += w[i] * uniq[corral[i]];
    return y;
  };

  int iterations = 0;
  bool capped = false;
  while (!capped) {
    // Major cycle: most violating point, lowest index on ties.
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      const double d = x.dot(uniq[i]);
      if (d < best) {
        best = d;
        j = i;
      }
    }
    const double xx = x.squaredNorm();
    if (best - xx >= -tol * (1.0 + xx)) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);
    w.push_back(0.0);

    // Minor cycles.
    for (;;) {
      if (++iterations > cap) {
        capped = true;
        break;
      }
      std::vector<const Vec*> members;
      members.reserve(corral.size());
      for (auto idx : corral) members.push_back(&uniq[idx]);
      const Vec v = affine_minimizer(members);

      if ((v.array() > 0.0).all()) {
        w.assign(v.data(), v.data() + v.size());
        x = combine();
        break;
      }

      double theta = 1.0;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (v(static_cast<Eigen::Index>(i)) <= 0.0) {
          const double denom = w[i] - v(static_cast<Eigen::Index>(i));
          const double ratio = denom > 0.0 ? w[i] / denom : 0.0;
          theta = std::min(theta, ratio);
        }
      }
      std::size_t drop = corral.size();
      double smallest = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < corral.size(); ++i) {
        w[i] = (1.0 - theta) * w[i] + theta * v(static_cast<Eigen::Index>(i));
        if (w[i] < smallest) {
          smallest = w[i];
          drop = i;
        }
      }
      // Drop every nonpositive weight, and at least the smallest one.
      std::vector<std::size_t> kept_idx;
      std::vector<double> kept_w;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        if (i == drop || w[i] <= 0.0) continue;
        kept_idx.push_back(corral[i]);
        kept_w.push_back(w[i]);
      }
      const double total = [&] {
        double s = 0.0;
        for (double wi : kept_w) s += wi;
        return s;
      }();
      for (double& wi : kept_w) wi /= total;
      corral = std::move(kept_idx);
      w = std::move(kept_w);
      x = combine();
    }
  }

  MinNormResult result;
  result.point = x;
  result.weights = Vec::Zero(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < corral.size(); ++i) {
    result.weights(static_cast<Eigen::Index>(origin[corral[i]])) += w[i];
  }
  double gap = 0.0;
  for (const auto& p : points) gap = std::max(gap, -x.dot(p - x));
  result.gap = gap;
  result.iterations = iterations;
  result.capped = capped;
  return result;
}

namespace {

using Counts = std::vector<std::int64_t>;

struct LatticeSearch {
  const Eigen::MatrixXd& pts;  // n x m
  Counts best;
  double best_value = std::numeric_limits<double>::infinity();
  std::int64_t denom = 1;

  double value(const Counts& c, std::int64_t d) const {
    Vec g = Vec::Zero(pts.rows());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0) g += (static_cast<double>(c[i]) / static_cast<double>(d)) * pts.col(static_cast<Eigen::Index>(i));
    }
    return g.squaredNorm();
  }

  void consider(const Counts& c, std::int64_t d) {
    const double v = value(c, d);
    if (v < best_value) {
      best_value = v;
      best = c;
      denom = d;
    }
  }

  // All compositions of `total` into m nonnegative parts.
  void exhaustive(std::int64_t total) {
    const std::size_t m = static_cast<std::size_t>(pts.cols());
    Counts c(m, 0);
    auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
      if (i + 1 == m) {
        c[i] = left;
        consider(c, total);
        return;
      }
      for (std::int64_t k = 0; k <= left; ++k) {
        c[i] = k;
        self(self, i + 1, left - k);
      }
    };
    rec(rec, 0, total);
  }

  // Lattice points within `radius` steps of the incumbent at the current spacing.
  void local(int radius) {
    const std::size_t m = best.size();
    const Counts center = best;
    const std::int64_t d = denom;
    Counts z(m, 0);
    Counts c(m, 0);
    auto rec = [&](auto&& self, std::size_t i, std::int64_t sum) -> void {
      if (i + 1 == m) {
        z[i] = -sum;
        if (z[i] < -radius || z[i] > radius) return;
        for (std::size_t t = 0; t < m; ++t) {
          c[t] = center[t] + z[t];
          if (c[t] < 0) return;
        }
        consider(c, d);
        return;
      }
      for (int k = -radius; k <= radius; ++k) {
        z[i] = k;
        self(self, i + 1, sum + k);
      }
    };
    rec(rec, 0, 0);
  }
};

double binomial(std::int64_t n, std::int64_t k) {
  double r = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

Vec min_norm_bruteforce(const std::vector<Vec>& points, double grid_resolution) {
  check_points(points);
  if (points.size() > 6) throw std::invalid_argument("min_norm_bruteforce: at most 6 points");
  if (!(grid_resolution > 0.0) || grid_resolution > 0.1) {
    throw std::invalid_argument("min_norm_bruteforce: grid_resolution must be in (0, 0.1]");
  }
  const auto m = static_cast<std::int64_t>(points.size());
  Eigen::MatrixXd pts(points.front().size(), m);
  for (std::int64_t i = 0; i < m; ++i) pts.col(i) = points[static_cast<std::size_t>(i)];
  if (m == 1) return points.front();

  LatticeSearch search{pts, {}, std::numeric_limits<double>::infinity(), 1};
  std::int64_t total = static_cast<std::int64_t>(std::ceil(1.0 / grid_resolution));
  while (total > 10 && binomial(total + m - 1, m - 1) > 2e5) total /= 2;
  search.exhaustive(total);

  const std::int64_t fine = static_cast<std::int64_t>(std::ceil(1.0 / grid_resolution));
  constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 52;
  int stagnant_levels = 0;
  while (search.denom < kMaxDenominator) {
    const double before = search.best_value;
    for (auto& c : search.best) c *= 2;
    search.denom *= 2;
    // Hill-climb at this spacing before refining further.
    for (int pass = 0; pass < 100000; ++pass) {
      const double v = search.best_value;
      search.local(3);
      if (!(search.best_value < v)) break;
    }
    const bool fine_enough = search.denom >= fine;
    const bool stagnant = before - search.best_value <= 1e-15 * (1.0 + before);
    stagnant_levels = stagnant ? stagnant_levels + 1 : 0;
    if (fine_enough && stagnant_levels >= 8) break;
  }

  Vec g = Vec::Zero(pts.rows());
  for (std::int64_t i = 0; i < m; ++i) {
    g += (static_cast<double>(search.best[static_cast<std::size_t>(i)]) / static_cast<double>(search.denom)) *
         pts.col(i);
  }
  return g;
}

}  // namespace mgs
