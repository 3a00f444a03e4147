#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "mgs/minnorm.hpp"
#include "support/oracles.hpp"

using namespace mgs;

namespace {

void check_certificates(const std::vector<Vec>& pts, const MinNormResult& r, double tol = 1e-12) {
  CHECK((r.weights.array() >= 0.0).all());
  CHECK(std::abs(r.weights.sum() - 1.0) <= 1e-12);
  Vec combo = Vec::Zero(r.point.size());
  for (std::size_t i = 0; i < pts.size(); ++i) combo += r.weights(static_cast<Eigen::Index>(i)) * pts[i];
  CHECK((combo - r.point).cwiseAbs().maxCoeff() <= 1e-10);
  for (const auto& p : pts) CHECK(r.point.dot(p - r.point) >= -tol * (1.0 + r.point.squaredNorm()));
  CHECK_FALSE(r.capped);
}

std::vector<Vec> random_points(test::Rng& rng, int m, int n) {
  std::vector<Vec> pts;
  for (int i = 0; i < m; ++i) {
    Vec p(n);
    for (int j = 0; j < n; ++j) p(j) = test::uniform(rng, -10, 10);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("singleton hull") {
  const std::vector<Vec> pts{Vec{{2.0, 0.0}}};
  const auto r = min_norm_point(pts);
  CHECK(r.point == Vec{{2.0, 0.0}});
  CHECK(r.weights(0) == 1.0);
  check_certificates(pts, r);
}

TEST_CASE("symmetric pair") {
  const std::vector<Vec> pts{Vec{{1.0, 1.0}}, Vec{{-1.0, 1.0}}};
  const auto r = min_norm_point(pts);
  CHECK(std::abs(r.point(0)) <= 1e-15);
  CHECK(r.point(1) == doctest::Approx(1.0));
  check_certificates(pts, r);
}

TEST_CASE("triangle: face opposite the origin") {
  const std::vector<Vec> pts{Vec{{3.0, 4.0}}, Vec{{3.0, -4.0}}, Vec{{5.0, 0.0}}};
  // Lattice oracle first.
  const Vec brute = min_norm_bruteforce(pts, 1e-3);
  CHECK((brute - Vec{{3.0, 0.0}}).norm() <= 1e-3);
  const auto r = min_norm_point(pts);
  CHECK((r.point - Vec{{3.0, 0.0}}).norm() <= 1e-12);
  CHECK(r.weights(2) == 0.0);
  check_certificates(pts, r);
}

TEST_CASE("segment away from the origin: nearest endpoint") {
  const std::vector<Vec> pts{Vec{{1.0, 0.0}}, Vec{{2.0, 0.0}}};
  const auto r = min_norm_point(pts);
  CHECK(r.point == Vec{{1.0, 0.0}});
  check_certificates(pts, r);
}

TEST_CASE("duplicates are merged onto the first occurrence") {
  const std::vector<Vec> pts{Vec{{1.0, 1.0}}, Vec{{1.0, 1.0}}, Vec{{-1.0, 1.0}}, Vec{{-1.0, 1.0}}};
  const auto r = min_norm_point(pts);
  CHECK(r.weights(1) == 0.0);
  CHECK(r.weights(3) == 0.0);
  CHECK(r.weights(0) == doctest::Approx(0.5));
  check_certificates(pts, r);
}

TEST_CASE("rank-deficient corral: collinear points through the origin") {
  const std::vector<Vec> pts{Vec{{-2.0, -2.0}}, Vec{{1.0, 1.0}}, Vec{{3.0, 3.0}}, Vec{{-1.0, -1.0}}};
  const auto r = min_norm_point(pts);
  CHECK(r.point.norm() <= 1e-12);
  check_certificates(pts, r);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(min_norm_point({}), std::invalid_argument);
  CHECK_THROWS_AS(min_norm_point({Vec{{1.0, std::numeric_limits<double>::quiet_NaN()}}}), std::invalid_argument);
  CHECK_THROWS_AS(min_norm_point({Vec{{1.0}}, Vec{{1.0, 2.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(min_norm_bruteforce(std::vector<Vec>(7, Vec{{1.0}}), 0.01), std::invalid_argument);
  CHECK_THROWS_AS(min_norm_bruteforce({Vec{{1.0}}}, 0.5), std::invalid_argument);
}

TEST_CASE("bruteforce lattice oracle") {
  const Vec a = min_norm_bruteforce({Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}}, 1e-3);
  CHECK((a - Vec{{0.5, 0.5}}).norm() <= 1e-3);
  const Vec b = min_norm_bruteforce({Vec{{1.0, 0.0}}, Vec{{-1.0, 0.0}}}, 1e-3);
  CHECK(b.norm() <= 1e-3);
}

TEST_CASE("agreement with the lattice oracle on random instances") {
  test::Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = test::uniform_int(rng, 1, 3);
    const int m = test::uniform_int(rng, 1, 5);
    const auto pts = random_points(rng, m, n);
    const auto r = min_norm_point(pts);
    const Vec brute = min_norm_bruteforce(pts, 1e-3);
    CAPTURE(trial);
    CHECK((r.point - brute).norm() <= 1e-2);
    CHECK(std::abs(r.point.norm() - brute.norm()) <= 1e-4);
    CHECK(r.gap <= 1e-10);
    check_certificates(pts, r);
  }
}

TEST_CASE("zero is detected when it lies in the hull") {
  test::Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = test::uniform_int(rng, 1, 4);
    const int m = test::uniform_int(rng, 2, 7);
    auto pts = random_points(rng, m - 1, n);
    // Append the point that puts the origin at a random interior combination.
    std::vector<double> w(static_cast<std::size_t>(m));
    for (auto& wi : w) wi = test::uniform(rng, 0.1, 1.0);
    Vec partial = Vec::Zero(n);
    for (int i = 0; i + 1 < m; ++i) partial += w[static_cast<std::size_t>(i)] * pts[static_cast<std::size_t>(i)];
    pts.push_back(-partial / w.back());
    double max_norm = 0.0;
    for (const auto& p : pts) max_norm = std::max(max_norm, p.norm());
    const auto r = min_norm_point(pts);
    CAPTURE(trial);
    CHECK(r.point.norm() <= 1e-12 * (1.0 + max_norm));
  }
}

TEST_CASE("value is invariant under permutations") {
  test::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = test::uniform_int(rng, 1, 4);
    const int m = test::uniform_int(rng, 1, 6);
    auto pts = random_points(rng, m, n);
    const double base = min_norm_point(pts).point.norm();
    for (int s = 0; s < 5; ++s) {
      std::shuffle(pts.begin(), pts.end(), rng);
      CHECK(std::abs(min_norm_point(pts).point.norm() - base) <= 1e-12);
    }
  }
}

TEST_CASE("deterministic for a fixed input order") {
  test::Rng rng(10);
  const auto pts = random_points(rng, 5, 3);
  const auto a = min_norm_point(pts);
  const auto b = min_norm_point(pts);
  CHECK(a.point == b.point);
  CHECK(a.weights == b.weights);
}
