// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cloudplan/catalog.hpp"
#include "cloudplan/vm_pool.hpp"

namespace cloudplan {

// Short-term planning. Each decision epoch compares the predicted demand
// r_p against the reserved capacity r_r and the running capacity r_c:
//
//   r_r < r_p  -> on_demand:       launch every idle reserved VM, and size
//                                  the on-demand set to the cheapest cover
//                                  of r_p - r_r
//   r_c < r_p  -> adjust_reserved: launch the cheapest idle reserved VMs
//                                  that lift planned capacity to r_p
//   r_c > r_p  -> shutdown:        release spare VMs nearest their billing
//                                  boundary first, never below r_p
//   otherwise  -> no_op
//
// The branches are tested in that order.
enum class Scenario { on_demand, adjust_reserved, shutdown, no_op };

std::string_view to_string(Scenario s);

struct SpaDecision {
  Scenario scenario = Scenario::no_op;
  std::int64_t r_m = 0;
  std::int64_t r_p = 0;
  std::int64_t r_c = 0;
  std::int64_t r_r = 0;
  std::vector<LaunchOrder> launches;
  std::vector<std::uint64_t> shutdowns;
  // Planned capacity (running + launching) after the decision is applied.
  std::int64_t resulting_capacity = 0;
  // Some VM that would otherwise be released is still inside min_rental.
  bool capped_by_min_rental = false;
};

// Pure: reads the pool, returns what to do. `now` is the interval just served.
SpaDecision spa_step(const VmPool& pool, std::int64_t r_m, std::int64_t r_p, const Catalog& catalog,
                     std::int64_t now);

// Applies launches and shutdowns to the pool at epoch `now`.
void apply_decision(VmPool& pool, const SpaDecision& decision, std::int64_t now);

// Cheapest on-demand counts covering `deficit`; same as ilp1_on_demand,
// returned as launch orders (count > 0 only).
std::vector<LaunchOrder> ilp1_launches(std::int64_t deficit, const Catalog& catalog);

// Idle reserved VMs to launch so planned capacity reaches r_p at minimum added
// usage cost. Throws std::logic_error unless r_p <= r_r, r_c < r_p and some
// reserved VM is idle.
std::vector<LaunchOrder> ilp2_adjust_configuration(const VmPool& pool, std::int64_t r_p, const Catalog& catalog);

// Running VMs past min_rental, ordered by fewest intervals left in the paid
// quantum, then on-demand before reserved, then id; taken greedily while the
// planned capacity stays >= r_p.
std::vector<std::uint64_t> shutdown_spare_vms(const VmPool& pool, std::int64_t r_p, std::int64_t now);

}  // namespace cloudplan
