// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/reservation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace cloudplan {

namespace {

using i128 = __int128;

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a <= 0 ? 0 : a / b + (a % b != 0 ? 1 : 0); }

i128 cost_scale(const DemandDistribution& dist, std::int64_t denominator) {
  return static_cast<i128>(denominator) * static_cast<i128>(dist.total_weight()) * Money::kMicrosPerUnit;
}

}  // namespace

double ExpectedCost::value() const { return static_cast<double>(static_cast<long double>(scaled) / static_cast<long double>(scale)); }

bool operator==(const ExpectedCost& a, const ExpectedCost& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const ExpectedCost& a, const ExpectedCost& b) {
  if (a.scale == b.scale) {
    return a.scaled < b.scaled ? std::strong_ordering::less
         : a.scaled > b.scaled ? std::strong_ordering::greater
                               : std::strong_ordering::equal;
  }
  const long double x = static_cast<long double>(a.scaled) / static_cast<long double>(a.scale);
  const long double y = static_cast<long double>(b.scaled) / static_cast<long double>(b.scale);
  return x < y ? std::strong_ordering::less : x > y ? std::strong_ordering::greater : std::strong_ordering::equal;
}

ExpectedCost expected_cost_single(const DemandDistribution& vm_units, std::int64_t reserved, const TypeRates& rates) {
  if (reserved < 0) throw std::invalid_argument("expected_cost_single: negative reservation");
  if (vm_units.empty()) throw std::invalid_argument("expected_cost_single: empty distribution");
  i128 launched = 0;  // sum w * min(d, r)
  i128 overflow = 0;  // sum w * (d - r)^+
  for (std::size_t i = 0; i < vm_units.size(); ++i) {
    const auto d = vm_units.support()[i];
    const auto w = static_cast<i128>(vm_units.weights()[i]);
    launched += w * std::min(d, reserved);
    overflow += w * std::max<std::int64_t>(d - reserved, 0);
  }
  const i128 total = vm_units.total_weight();
  return ExpectedCost{static_cast<i128>(reserved) * rates.upfront * total + launched * rates.usage +
                          overflow * rates.on_demand,
                      cost_scale(vm_units, rates.denominator)};
}

ExpectedCost reservation_marginal(const DemandDistribution& vm_units, std::int64_t r, const TypeRates& rates) {
  const i128 total = vm_units.total_weight();
  const i128 above = vm_units.weight_above(r);
  return ExpectedCost{static_cast<i128>(rates.upfront) * total + static_cast<i128>(rates.usage - rates.on_demand) * above,
                      cost_scale(vm_units, rates.denominator)};
}

SingleTypeOptimum optimal_reservation_single(const DemandDistribution& vm_units, const TypeRates& rates) {
  if (vm_units.empty()) throw std::invalid_argument("optimal_reservation_single: empty distribution");
  // The marginal only changes at support points, and is >= 0 from max support
  // on (no mass above), so scanning candidates r in {0} u support suffices.
  std::int64_t r_star = vm_units.max_value();
  if (reservation_marginal(vm_units, 0, rates).scaled >= 0) {
    r_star = 0;
  } else {
    for (auto value : vm_units.support()) {
      if (reservation_marginal(vm_units, value, rates).scaled >= 0) {
        r_star = value;
        break;
      }
    }
  }
  return SingleTypeOptimum{r_star, std::max<std::int64_t>(r_star - 1, 0), r_star};
}

CoverSolution solve_covering_ilp(const Catalog& catalog, std::int64_t reserved_demand) {
  if (reserved_demand < 0) throw std::invalid_argument("solve_covering_ilp: negative demand");
  if (catalog.empty() && reserved_demand > 0) throw std::invalid_argument("solve_covering_ilp: empty catalog");
  std::vector<CoverItem> items;
  items.reserve(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    items.push_back(CoverItem{catalog.type(i).capacity, catalog.pricing(i).upfront_total.micros(), std::nullopt});
  }
  return *solve_cover(items, reserved_demand);
}

CoverSolution ilp1_on_demand(std::int64_t deficit, const Catalog& catalog) {
  if (catalog.empty() && deficit > 0) throw std::invalid_argument("ilp1_on_demand: empty catalog");
  std::vector<CoverItem> items;
  items.reserve(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    items.push_back(CoverItem{catalog.type(i).capacity, catalog.pricing(i).on_demand_per_quantum.micros(), std::nullopt});
  }
  return *solve_cover(items, deficit);
}

ReservationPlan ReservationPlan::empty(const Catalog& catalog) {
  ReservationPlan plan;
  plan.lease_period = catalog.lease_period();
  plan.quantities.assign(catalog.size(), 0);
  return plan;
}

bool ReservationPlan::is_empty() const {
  return std::all_of(quantities.begin(), quantities.end(), [](auto n) { return n == 0; });
}

ExpectedCost expected_cost_mixed(const DemandDistribution& raw_demand, const Catalog& catalog,
                                 const std::vector<std::int64_t>& quantities) {
  if (raw_demand.empty()) throw std::invalid_argument("expected_cost_mixed: empty distribution");
  if (quantities.size() != catalog.size()) throw std::invalid_argument("expected_cost_mixed: quantity vector size");
  const auto& rates = catalog.rates();
  const std::int64_t denominator = catalog.empty() ? 1 : rates.rates.front().denominator;

  std::int64_t reserved_capacity = 0;
  i128 upfront = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    reserved_capacity += quantities[i] * catalog.type(i).capacity;
    upfront += static_cast<i128>(quantities[i]) * rates.rates[i].upfront;
  }

  std::vector<std::size_t> launch_order(catalog.size());
  std::iota(launch_order.begin(), launch_order.end(), std::size_t{0});
  std::stable_sort(launch_order.begin(), launch_order.end(), [&](std::size_t a, std::size_t b) {
    return static_cast<i128>(rates.rates[a].usage) * catalog.type(b).capacity <
           static_cast<i128>(rates.rates[b].usage) * catalog.type(a).capacity;
  });

  std::vector<CoverItem> od_items;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    od_items.push_back(CoverItem{catalog.type(i).capacity, rates.rates[i].on_demand, std::nullopt});
  }
  const auto max_overflow = std::max<std::int64_t>(raw_demand.max_value() - reserved_capacity, 0);
  if (max_overflow > 0 && catalog.empty()) throw std::invalid_argument("expected_cost_mixed: empty catalog");
  const auto od_table = cover_cost_table(od_items, max_overflow);

  i128 variable = 0;
  for (std::size_t k = 0; k < raw_demand.size(); ++k) {
    const auto d = raw_demand.support()[k];
    const auto w = static_cast<i128>(raw_demand.weights()[k]);
    std::int64_t residual = std::min(d, reserved_capacity);
    i128 usage = 0;
    for (auto i : launch_order) {
      if (residual <= 0) break;
      const auto n = std::min(quantities[i], ceil_div(residual, catalog.type(i).capacity));
      residual -= n * catalog.type(i).capacity;
      usage += static_cast<i128>(n) * rates.rates[i].usage;
    }
    const auto overflow = std::max<std::int64_t>(d - reserved_capacity, 0);
    variable += w * (usage + od_table[static_cast<std::size_t>(overflow)]);
  }
  return ExpectedCost{upfront * raw_demand.total_weight() + variable, cost_scale(raw_demand, denominator)};
}

ReservationPlan plan_reservation(const DemandDistribution& raw_demand, const Catalog& catalog) {
  if (catalog.empty()) throw std::invalid_argument("plan_reservation: empty catalog");
  if (raw_demand.empty()) throw std::invalid_argument("plan_reservation: empty distribution");

  const auto best = best_cp_type(catalog);
  const auto capacity = catalog.type(best).capacity;
  const auto optimum = optimal_reservation_single(raw_demand.to_vm_units(capacity), catalog.rates(best));

  ReservationPlan plan = ReservationPlan::empty(catalog);
  plan.best_cp_type = catalog.type(best).id;
  plan.r_star = optimum.r_star;
  plan.window_lo = optimum.lower * capacity;
  plan.window_hi = optimum.upper * capacity;

  std::vector<std::int64_t> candidates{0};
  for (auto c = std::max<std::int64_t>((optimum.r_star - 1) * capacity, 1); c <= optimum.r_star * capacity; ++c) {
    candidates.push_back(c);
  }

  std::map<std::vector<std::int64_t>, ExpectedCost> evaluated;
  std::optional<ExpectedCost> best_cost;
  for (auto c : candidates) {
    auto cover = solve_covering_ilp(catalog, c);
    auto it = evaluated.find(cover.counts);
    if (it == evaluated.end()) {
      it = evaluated.emplace(cover.counts, expected_cost_mixed(raw_demand, catalog, cover.counts)).first;
    }
    if (!best_cost || it->second < *best_cost) {
      best_cost = it->second;
      plan.quantities = cover.counts;
    }
  }

  plan.reserved_capacity = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) plan.reserved_capacity += plan.quantities[i] * catalog.type(i).capacity;
  plan.expected_cost_per_interval = best_cost->value();
  return plan;
}

}  // namespace cloudplan
