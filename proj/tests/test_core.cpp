#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mgs/core.hpp"
#include "mgs/testfns.hpp"
#include "support/oracles.hpp"

using namespace mgs;

namespace {

bool has_error(const std::vector<std::string>& errors, const std::string& what) {
  return std::find(errors.begin(), errors.end(), what) != errors.end();
}

}  // namespace

TEST_CASE("validate_params accepts interior values with m = n + 1") {
  GsParams p;
  p.alpha = p.beta = p.gamma = 0.5;
  p.m = 4;
  CHECK(validate_params(p, 3).empty());
  CHECK_NOTHROW(require_valid_params(p, 3));
}

TEST_CASE("validate_params rejects m < n + 1") {
  GsParams p;
  p.m = 3;
  const auto errors = validate_params(p, 3);
  CHECK(has_error(errors, "m < n+1"));
  CHECK_THROWS_AS(require_valid_params(p, 3), std::invalid_argument);
}

TEST_CASE("validate_params rejects discount factors outside (0,1)") {
  GsParams p;
  p.mu = 1.0;
  CHECK(has_error(validate_params(p, 2), "mu not in (0,1)"));
  p.mu = 0.5;
  p.vartheta = 0.0;
  CHECK(has_error(validate_params(p, 2), "vartheta not in (0,1)"));
}

TEST_CASE("validate_params collects every violation") {
  GsParams p;
  p.alpha = 1.5;
  p.beta = 0.0;
  p.eps1 = -1.0;
  p.delta_decay = 1.0;
  p.t_init_factor = 0.1;  // < gamma / 3 with gamma = 0.5
  const auto errors = validate_params(p, 1);
  CHECK(has_error(errors, "alpha not in (0,1)"));
  CHECK(has_error(errors, "beta not in (0,1)"));
  CHECK(has_error(errors, "eps1 not positive"));
  CHECK(has_error(errors, "delta_decay not in (0,1)"));
  CHECK(has_error(errors, "t_init_factor < gamma/3"));
}

TEST_CASE("default sample count is n + 2 and delta schedule decays geometrically") {
  GsParams p;
  CHECK(p.sample_count(2) == 4);
  p.m = 7;
  CHECK(p.sample_count(2) == 7);
  double prev = p.delta(1);
  CHECK(prev == doctest::Approx(1e-3));
  for (int k = 2; k < 200; ++k) {
    const double d = p.delta(k);
    CHECK(d < prev);
    CHECK(d > 0.0);
    prev = d;
  }
}

TEST_CASE("accuracy_to_distance") {
  CHECK(accuracy_to_distance(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(accuracy_to_distance(2.0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(accuracy_to_distance(1e-6, 2.0) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK_THROWS_AS(accuracy_to_distance(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(accuracy_to_distance(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("regularization_rho") {
  CHECK(regularization_rho(1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(regularization_rho(0.01, 1.0) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(regularization_rho(0.5, 4.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(regularization_rho(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regularization_rho(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("regularized maximum stays within epsilon of f") {
  // theta -> <c, theta> - rho/2 ||theta||^2 on the standard simplex vertices
  // and a grid of interior points.
  test::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec c{{test::uniform(rng, -1, 1), test::uniform(rng, -1, 1)}};
    const double epsilon = test::uniform(rng, 0.01, 0.5);
    const double rho = regularization_rho(epsilon, 1.0);  // max ||theta||^2 = 1 on the simplex
    double f = -1e300;
    double f_rho = -1e300;
    for (int s = 0; s <= 1000; ++s) {
      const Vec theta{{s / 1000.0, 1.0 - s / 1000.0}};
      f = std::max(f, c.dot(theta));
      f_rho = std::max(f_rho, c.dot(theta) - 0.5 * rho * theta.squaredNorm());
    }
    CHECK(f_rho <= f + 1e-15);
    CHECK(f_rho >= f - epsilon - 1e-15);
  }
}

TEST_CASE("enum names round-trip") {
  for (auto k : {StepKind::Descent, StepKind::NullTolerance, StepKind::NullLineSearch, StepKind::Terminal}) {
    CHECK(step_kind_from_string(to_string(k)) == k);
  }
  for (auto t : {Termination::MaxIters, Termination::TolerancesReached, Termination::NonsmoothSampleStop,
                 Termination::Stalled, Termination::LeftDomain}) {
    CHECK(termination_from_string(to_string(t)) == t);
  }
  CHECK(nonsmooth_policy_from_string("Resample") == NonsmoothPolicy::Resample);
  CHECK_THROWS(step_kind_from_string("bogus"));
}

TEST_CASE("oracle evaluations are pure") {
  const auto oracle = testfns::finite_max_oracle(testfns::abs_problem());
  test::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec x = Vec::Constant(1, test::uniform(rng, -2, 2));
    const Vec theta = oracle->inner_max(x, 0.0).theta;
    CHECK(oracle->eval_F(x, theta) == oracle->eval_F(x, theta));
    CHECK(oracle->grad_x_F(x, theta) == oracle->grad_x_F(x, theta));
  }
}
