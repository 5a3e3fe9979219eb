// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/cover_ilp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cloudplan {

namespace {

using i128 = __int128;

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a <= 0 ? 0 : a / b + (a % b != 0 ? 1 : 0); }

// cost_a / cap_a < cost_b / cap_b
bool cheaper_ratio(const CoverItem& a, const CoverItem& b) {
  return static_cast<i128>(a.cost) * b.capacity < static_cast<i128>(b.cost) * a.capacity;
}

class CoverSearch {
 public:
  CoverSearch(std::span<const CoverItem> items, std::int64_t demand) : items_(items), demand_(demand) {
    const auto m = items_.size();
    best_ratio_.assign(m + 1, -1);
    suffix_capacity_.assign(m + 1, 0);
    for (std::size_t k = m; k-- > 0;) {
      const auto& it = items_[k];
      const auto next = best_ratio_[k + 1];
      best_ratio_[k] = (next < 0 || cheaper_ratio(it, items_[static_cast<std::size_t>(next)]))
                           ? static_cast<std::ptrdiff_t>(k)
                           : next;
      const auto tail = suffix_capacity_[k + 1];
      if (!it.max_count || tail == kUnbounded) {
        suffix_capacity_[k] = kUnbounded;
      } else {
        const i128 add = static_cast<i128>(*it.max_count) * it.capacity + tail;
        suffix_capacity_[k] = add >= kUnbounded ? kUnbounded : static_cast<std::int64_t>(add);
      }
    }
    counts_.assign(m, 0);
  }

  std::optional<CoverSolution> run() {
    if (demand_ <= 0) return CoverSolution{std::vector<std::int64_t>(items_.size(), 0), 0, 0};
    if (suffix_capacity_[0] < demand_) return std::nullopt;
    seed_incumbent();
    dfs(0, demand_, 0);
    if (!found_) return std::nullopt;
    CoverSolution sol{best_counts_, best_cost_, 0};
    for (std::size_t k = 0; k < items_.size(); ++k) sol.capacity += sol.counts[k] * items_[k].capacity;
    return sol;
  }

 private:
  // Greedy by cost/capacity gives a feasible upper bound to prune against.
  // It is not recorded as a solution: the search must still reach the
  // lexicographically smallest optimum itself.
  void seed_incumbent() {
    std::vector<std::size_t> order(items_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cheaper_ratio(items_[a], items_[b]); });
    std::int64_t residual = demand_;
    i128 cost = 0;
    for (auto k : order) {
      if (residual <= 0) break;
      const auto& it = items_[k];
      const auto n = std::min(ceil_div(residual, it.capacity), it.max_count.value_or(kUnbounded));
      residual -= n * it.capacity;
      cost += static_cast<i128>(n) * it.cost;
    }
    if (residual <= 0) {
      bound_ = cost;
      have_bound_ = true;
    }
  }

  // True when no completion of this branch can be accepted.
  bool prune(std::size_t k, std::int64_t residual, i128 partial) const {
    if (!have_bound_) return false;
    const auto r = best_ratio_[k];
    if (r < 0) return true;
    const auto& it = items_[static_cast<std::size_t>(r)];
    // lower bound = partial + residual * cost/capacity, compared without division
    const i128 lhs = partial * it.capacity + static_cast<i128>(residual) * it.cost;
    const i128 rhs = bound_ * it.capacity;
    return found_ ? lhs >= rhs : lhs > rhs;
  }

  void dfs(std::size_t k, std::int64_t residual, i128 partial) {
    if (residual <= 0) {
      if (!have_bound_ || partial < bound_ || (partial == bound_ && !found_)) {
        bound_ = partial;
        have_bound_ = true;
        found_ = true;
        best_cost_ = static_cast<std::int64_t>(partial);
        best_counts_ = counts_;
      }
      return;
    }
    if (k == items_.size() || suffix_capacity_[k] < residual || prune(k, residual, partial)) return;

    const auto& it = items_[k];
    const auto tail = suffix_capacity_[k + 1];
    const auto lo = tail == kUnbounded ? 0 : ceil_div(residual - tail, it.capacity);
    const auto hi = std::min(ceil_div(residual, it.capacity), it.max_count.value_or(kUnbounded));
    for (auto n = lo; n <= hi; ++n) {
      counts_[k] = n;
      dfs(k + 1, residual - n * it.capacity, partial + static_cast<i128>(n) * it.cost);
    }
    counts_[k] = 0;
  }

  std::span<const CoverItem> items_;
  std::int64_t demand_;
  std::vector<std::ptrdiff_t> best_ratio_;  // index of the cheapest-ratio item in [k, m)
  std::vector<std::int64_t> suffix_capacity_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> best_counts_;
  i128 bound_ = 0;
  bool have_bound_ = false;
  bool found_ = false;
  std::int64_t best_cost_ = 0;
};

void check_items(std::span<const CoverItem> items) {
  for (const auto& it : items) {
    if (it.capacity < 1) throw std::invalid_argument("cover: capacity must be >= 1");
    if (it.cost < 0) throw std::invalid_argument("cover: cost must be >= 0");
    if (it.max_count && *it.max_count < 0) throw std::invalid_argument("cover: max_count must be >= 0");
  }
}

}  // namespace

std::optional<CoverSolution> solve_cover(std::span<const CoverItem> items, std::int64_t demand) {
  check_items(items);
  return CoverSearch(items, demand).run();
}

std::vector<std::int64_t> cover_cost_table(std::span<const CoverItem> items, std::int64_t max_demand) {
  check_items(items);
  if (max_demand < 0) return {};
  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> table(static_cast<std::size_t>(max_demand) + 1, kInf);
  table[0] = 0;
  for (std::int64_t x = 1; x <= max_demand; ++x) {
    auto& best = table[static_cast<std::size_t>(x)];
    for (const auto& it : items) {
      const auto prev = table[static_cast<std::size_t>(std::max<std::int64_t>(0, x - it.capacity))];
      if (prev != kInf) best = std::min(best, prev + it.cost);
    }
  }
  return table;
}

}  // namespace cloudplan
