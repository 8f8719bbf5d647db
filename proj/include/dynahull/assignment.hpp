// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef DYNAHULL_ASSIGNMENT_HPP_
#define DYNAHULL_ASSIGNMENT_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace dynahull {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

// Exact minimum-cost perfect matching on a dense n x n row-major cost
// matrix (shortest augmenting paths with dual potentials, O(n^3)).
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace dynahull

#endif  // DYNAHULL_ASSIGNMENT_HPP_
