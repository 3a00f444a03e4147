#pragma once

#include <vector>

#include "mgs/core.hpp"

namespace mgs {

struct MinNormResult {
  Vec point;
  /// Convex weights over the input points, in input order.
  Vec weights;
  /// Wolfe certificate max_i max(0, -<g, p_i - g>).
  double gap = 0.0;
  int iterations = 0;
  /// Set when the iteration cap (64 m) was hit before the Wolfe test passed.
  bool capped = false;
};

/// Least-norm element of conv(points) by Wolfe's method.
///
/// Duplicates (bitwise) are merged before solving; their weight is reported on
/// the first occurrence. Stops once <g, p_i - g> >= -tol * (1 + ||g||^2) for
/// every input point. Throws std::invalid_argument on empty or non-finite input.
MinNormResult min_norm_point(const std::vector<Vec>& points, double tol = 1e-12);

/// Test oracle: minimizes ||sum_i w_i p_i|| over simplex lattices.
///
/// An exhaustive pass over the lattice with spacing max(grid_resolution, h_budget)
/// (h_budget keeps the pass under ~2e5 points) is followed by local
/// hill-climbing on nested lattices that halve the spacing around the
/// incumbent until the spacing is below grid_resolution and the value stops
/// improving. Uses no gradient or
/// optimality information. Requires m <= 6 and grid_resolution in (0, 0.1].
Vec min_norm_bruteforce(const std::vector<Vec>& points, double grid_resolution);

}  // namespace mgs
