// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/assignment.hpp"

#include <algorithm>
#include <limits>

#include "dynahull/error.hpp"

namespace dynahull {

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "cost matrix must be n x n");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based rows/columns; column 0 is the virtual source of each augmenting
  // path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  auto at = [&](std::size_t r, std::size_t c) { return cost[(r - 1) * n + (c - 1)]; };

  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = match[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = at(r0, c) - u[r0] - v[c];
        if (cur < min_slack[c]) {
          min_slack[c] = cur;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  Assignment out;
  out.row_to_col.assign(n, 0);
  for (std::size_t c = 1; c <= n; ++c) {
    if (match[c] != 0) out.row_to_col[match[c] - 1] = c - 1;
  }
  for (std::size_t r = 0; r < n; ++r) out.cost += cost[r * n + out.row_to_col[r]];
  return out;
}

}  // namespace dynahull
