// SPDX-License-Identifier: Apache-2.0
// Brute-force reference computations used only by the tests. They share no
// code with the library routines they check.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace cloudplan::oracle {

struct Item {
  std::int64_t capacity;
  std::int64_t cost;
  std::int64_t max_count = std::numeric_limits<std::int64_t>::max();
};

struct Cover {
  std::vector<std::int64_t> counts;
  std::int64_t cost = 0;
};

// Exhaustive search over count vectors in lexicographic order; first strictly
// cheaper vector wins, so ties resolve to the lexicographically smallest.
// The last coordinate is set to the least count that completes the cover:
// any smaller value is infeasible and any larger one costs no less and is
// lexicographically larger.
inline std::optional<Cover> enumerate_cover(const std::vector<Item>& items, std::int64_t demand) {
  const auto m = items.size();
  if (demand <= 0) return Cover{std::vector<std::int64_t>(m, 0), 0};
  if (m == 0) return std::nullopt;
  auto ceil_div = [](std::int64_t a, std::int64_t b) { return a <= 0 ? std::int64_t{0} : (a + b - 1) / b; };
  std::vector<std::int64_t> hi(m);
  for (std::size_t i = 0; i < m; ++i) hi[i] = std::min(items[i].max_count, ceil_div(demand, items[i].capacity));

  std::optional<Cover> best;
  std::vector<std::int64_t> n(m, 0);
  while (true) {
    std::int64_t cap = 0;
    std::int64_t cost = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      cap += n[i] * items[i].capacity;
      cost += n[i] * items[i].cost;
    }
    const auto last = ceil_div(demand - cap, items[m - 1].capacity);
    if (last <= hi[m - 1]) {
      n[m - 1] = last;
      cost += last * items[m - 1].cost;
      if (!best || cost < best->cost) best = Cover{n, cost};
    }
    n[m - 1] = 0;
    // odometer over the first m-1 coordinates, most significant first
    std::size_t k = m - 1;
    while (k > 0) {
      --k;
      if (n[k] < hi[k]) {
        ++n[k];
        for (std::size_t j = k + 1; j + 1 < m; ++j) n[j] = 0;
        break;
      }
      if (k == 0) return best;
    }
    if (m == 1) return best;
  }
}

// Expected per-interval cost of reserving r instances, scaled by the total
// weight, evaluated sample point by sample point.
inline __int128 scaled_single_cost(const std::vector<std::int64_t>& support, const std::vector<std::uint64_t>& weights,
                                   std::int64_t r, std::int64_t upfront, std::int64_t usage, std::int64_t on_demand) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const std::int64_t d = support[i];
    const std::int64_t used = d < r ? d : r;
    const std::int64_t over = d > r ? d - r : 0;
    acc += static_cast<__int128>(weights[i]) *
           (static_cast<__int128>(r) * upfront + static_cast<__int128>(used) * usage +
            static_cast<__int128>(over) * on_demand);
  }
  return acc;
}

// Smallest argmin of scaled_single_cost over r in [0, max_r].
inline std::int64_t brute_force_r_star(const std::vector<std::int64_t>& support,
                                       const std::vector<std::uint64_t>& weights, std::int64_t max_r,
                                       std::int64_t upfront, std::int64_t usage, std::int64_t on_demand) {
  std::int64_t best_r = 0;
  auto best = scaled_single_cost(support, weights, 0, upfront, usage, on_demand);
  for (std::int64_t r = 1; r <= max_r; ++r) {
    const auto c = scaled_single_cost(support, weights, r, upfront, usage, on_demand);
    if (c < best) {
      best = c;
      best_r = r;
    }
  }
  return best_r;
}

}  // namespace cloudplan::oracle
