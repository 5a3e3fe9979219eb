// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "cloudplan/catalog.hpp"
#include "cloudplan/cover_ilp.hpp"
#include "cloudplan/demand.hpp"

namespace cloudplan {

// Expected per-interval cost kept as an exact fraction scaled / scale, where
// scale = rate denominator * distribution total weight * 1e6. Values computed
// against the same distribution and catalog share a scale and compare exactly.
struct ExpectedCost {
  __int128 scaled = 0;
  __int128 scale = 1;

  double value() const;

  friend bool operator==(const ExpectedCost& a, const ExpectedCost& b);
  friend std::strong_ordering operator<=>(const ExpectedCost& a, const ExpectedCost& b);
};

// Expected per-interval cost of reserving `reserved` instances of one type
// against a distribution in that type's VM units:
//   reserved * upfront + usage * E[min(D, reserved)] + on_demand * E[(D - reserved)^+]
ExpectedCost expected_cost_single(const DemandDistribution& vm_units, std::int64_t reserved, const TypeRates& rates);

struct SingleTypeOptimum {
  std::int64_t r_star = 0;
  std::int64_t lower = 0;  // max(r_star - 1, 0)
  std::int64_t upper = 0;  // r_star
};

// Smallest r whose marginal cost
//   upfront + (usage - on_demand) * P(D >= r + 1)
// is nonnegative. The expected cost is convex in r whenever on_demand >= usage,
// so this is the smallest minimizer; when on_demand <= usage the answer is 0.
SingleTypeOptimum optimal_reservation_single(const DemandDistribution& vm_units, const TypeRates& rates);

// Marginal cost of the (r+1)-th reserved instance, same scale as ExpectedCost.
ExpectedCost reservation_marginal(const DemandDistribution& vm_units, std::int64_t r, const TypeRates& rates);

// Upfront-minimal set of reserved instances with total capacity >= reserved_demand.
// Throws std::invalid_argument for an empty catalog with positive demand.
CoverSolution solve_covering_ilp(const Catalog& catalog, std::int64_t reserved_demand);

// Instance counts minimizing on-demand cost per quantum with capacity >= deficit.
CoverSolution ilp1_on_demand(std::int64_t deficit, const Catalog& catalog);

struct ReservationPlan {
  std::int64_t lease_period = 0;
  std::vector<std::int64_t> quantities;  // parallel to catalog types
  std::int64_t reserved_capacity = 0;
  double expected_cost_per_interval = 0.0;
  // Reference single-type solution the plan was searched around.
  std::string best_cp_type;
  std::int64_t r_star = 0;
  std::int64_t window_lo = 0;  // capacity range searched, inclusive
  std::int64_t window_hi = 0;

  static ReservationPlan empty(const Catalog& catalog);
  bool is_empty() const;
};

// Exact expected per-interval cost of holding `quantities` reserved against raw
// demand. For each demand level reserved instances are launched cheapest usage
// per capacity first until the demand (or the whole pool) is covered; overflow
// is priced by the cheapest on-demand cover, spread per interval.
ExpectedCost expected_cost_mixed(const DemandDistribution& raw_demand, const Catalog& catalog,
                                 const std::vector<std::int64_t>& quantities);

// Long-term plan: take the best capacity/price type, solve its single-type
// optimum r*, then cover every reserved demand in
// {0} and [(r*-1) * C_best, r* * C_best] with the upfront-minimal mix and keep
// the mix with the lowest expected cost (ties: smaller reserved demand).
ReservationPlan plan_reservation(const DemandDistribution& raw_demand, const Catalog& catalog);

}  // namespace cloudplan
