// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cloudplan {

// One integer variable of a covering program: choose count >= 0 copies of
// an item with the given capacity and cost, at most max_count of them.
struct CoverItem {
  std::int64_t capacity = 1;
  std::int64_t cost = 0;
  std::optional<std::int64_t> max_count;
};

struct CoverSolution {
  std::vector<std::int64_t> counts;
  std::int64_t cost = 0;
  std::int64_t capacity = 0;
};

// Exact minimum-cost cover:
//   minimize  sum counts[i] * cost[i]
//   s.t.      sum counts[i] * capacity[i] >= demand,  0 <= counts[i] <= max_count[i].
// Among optimal solutions the lexicographically smallest count vector wins.
// Depth-first branch and bound; each count is bounded by ceil(residual / capacity)
// and a branch is cut when its partial cost plus the fractional lower bound
// reaches the incumbent. Returns nullopt when the bounds make it infeasible.
// Costs must be nonnegative and capacities positive.
std::optional<CoverSolution> solve_cover(std::span<const CoverItem> items, std::int64_t demand);

// Minimum cover cost for every demand 0..max_demand by unbounded-knapsack
// dynamic programming. Used to price on-demand overflow over a whole
// distribution; agrees with solve_cover on cost (not on the count vector).
std::vector<std::int64_t> cover_cost_table(std::span<const CoverItem> items, std::int64_t max_demand);

}  // namespace cloudplan
