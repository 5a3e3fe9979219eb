// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/spa.hpp"

#include <algorithm>
#include <stdexcept>

#include "cloudplan/cover_ilp.hpp"
#include "cloudplan/reservation.hpp"

namespace cloudplan {

namespace {

struct Candidate {
  const VmInstance* vm;
  std::int64_t remaining;
};

bool locked_by_min_rental(const VmInstance& vm, const PoolSettings& s, std::int64_t now) {
  return vm.status == VmStatus::running && vm.intervals_run(now) < s.min_rental;
}

std::vector<Candidate> shutdown_candidates(const VmPool& pool, std::int64_t now, auto&& filter) {
  const auto& s = pool.settings();
  std::vector<Candidate> out;
  for (const auto& vm : pool.instances()) {
    if (vm.status != VmStatus::running || locked_by_min_rental(vm, s, now) || !filter(vm)) continue;
    out.push_back(Candidate{&vm, vm.quantum_remaining(now, s.billing_quantum)});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.remaining != b.remaining) return a.remaining < b.remaining;
    if (a.vm->tier != b.vm->tier) return a.vm->tier == Tier::on_demand;
    return a.vm->id < b.vm->id;
  });
  return out;
}

std::int64_t launch_capacity(const std::vector<LaunchOrder>& launches, const Catalog& catalog) {
  std::int64_t total = 0;
  for (const auto& l : launches) total += l.count * catalog.type(l.type).capacity;
  return total;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::on_demand: return "on_demand";
    case Scenario::adjust_reserved: return "adjust_reserved";
    case Scenario::shutdown: return "shutdown";
    case Scenario::no_op: return "no_op";
  }
  return "?";
}

std::vector<LaunchOrder> ilp1_launches(std::int64_t deficit, const Catalog& catalog) {
  std::vector<LaunchOrder> out;
  if (deficit <= 0) return out;
  const auto sol = ilp1_on_demand(deficit, catalog);
  for (std::size_t i = 0; i < sol.counts.size(); ++i) {
    if (sol.counts[i] > 0) out.push_back(LaunchOrder{i, Tier::on_demand, sol.counts[i]});
  }
  return out;
}

std::vector<LaunchOrder> ilp2_adjust_configuration(const VmPool& pool, std::int64_t r_p, const Catalog& catalog) {
  if (r_p > pool.reserved_capacity()) throw std::logic_error("ilp2: predicted demand exceeds reserved capacity");
  if (pool.capacity_of() >= r_p) throw std::logic_error("ilp2: running capacity already covers predicted demand");

  std::vector<CoverItem> items;
  bool any_idle = false;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto idle = pool.idle_reserved(i);
    any_idle = any_idle || idle > 0;
    items.push_back(CoverItem{catalog.type(i).capacity, catalog.pricing(i).reserved_usage_per_interval.micros(), idle});
  }
  if (!any_idle) throw std::logic_error("ilp2: every reserved VM is already launched");

  std::vector<LaunchOrder> out;
  const auto need = r_p - pool.planned_capacity();
  if (need <= 0) return out;  // launching VMs already cover it
  const auto sol = solve_cover(items, need);
  if (!sol) throw std::logic_error("ilp2: idle reserved capacity cannot cover predicted demand");
  for (std::size_t i = 0; i < sol->counts.size(); ++i) {
    if (sol->counts[i] > 0) out.push_back(LaunchOrder{i, Tier::reserved, sol->counts[i]});
  }
  return out;
}

std::vector<std::uint64_t> shutdown_spare_vms(const VmPool& pool, std::int64_t r_p, std::int64_t now) {
  std::vector<std::uint64_t> out;
  auto capacity = pool.planned_capacity();
  for (const auto& c : shutdown_candidates(pool, now, [](const VmInstance&) { return true; })) {
    const auto cap = pool.catalog().type(c.vm->type).capacity;
    if (capacity - cap >= r_p) {
      capacity -= cap;
      out.push_back(c.vm->id);
    }
  }
  return out;
}

SpaDecision spa_step(const VmPool& pool, std::int64_t r_m, std::int64_t r_p, const Catalog& catalog,
                     std::int64_t now) {
  SpaDecision d;
  d.r_m = r_m;
  d.r_p = r_p;
  d.r_c = pool.capacity_of();
  d.r_r = pool.reserved_capacity();
  auto capacity = pool.planned_capacity();
  const auto& settings = pool.settings();

  if (d.r_r < r_p) {
    d.scenario = Scenario::on_demand;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      if (const auto idle = pool.idle_reserved(i); idle > 0) d.launches.push_back(LaunchOrder{i, Tier::reserved, idle});
    }
    // Reconcile the on-demand set I_0 with the cheapest cover of the deficit.
    std::vector<std::int64_t> target(catalog.size(), 0);
    for (const auto& l : ilp1_launches(r_p - d.r_r, catalog)) target[l.type] = l.count;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const auto active = pool.active_count(i, Tier::on_demand);
      if (active < target[i]) {
        d.launches.push_back(LaunchOrder{i, Tier::on_demand, target[i] - active});
      } else if (active > target[i]) {
        auto surplus = active - target[i];
        for (const auto& c : shutdown_candidates(pool, now, [&](const VmInstance& vm) {
               return vm.type == i && vm.tier == Tier::on_demand;
             })) {
          if (surplus == 0) break;
          d.shutdowns.push_back(c.vm->id);
          capacity -= catalog.type(i).capacity;
          --surplus;
        }
        if (surplus > 0) d.capped_by_min_rental = true;
      }
    }
    capacity += launch_capacity(d.launches, catalog);
  } else if (d.r_c < r_p) {
    d.scenario = Scenario::adjust_reserved;
    if (capacity < r_p) d.launches = ilp2_adjust_configuration(pool, r_p, catalog);
    capacity += launch_capacity(d.launches, catalog);
  } else if (d.r_c > r_p) {
    d.scenario = Scenario::shutdown;
    d.shutdowns = shutdown_spare_vms(pool, r_p, now);
    for (auto id : d.shutdowns) capacity -= catalog.type(pool.find(id)->type).capacity;
    const auto slack = capacity - r_p;
    for (const auto& vm : pool.instances()) {
      if (locked_by_min_rental(vm, settings, now) && catalog.type(vm.type).capacity <= slack) {
        d.capped_by_min_rental = true;
        break;
      }
    }
  } else {
    d.scenario = Scenario::no_op;
  }
  d.resulting_capacity = capacity;
  return d;
}

void apply_decision(VmPool& pool, const SpaDecision& decision, std::int64_t now) {
  for (auto id : decision.shutdowns) pool.shut_down(id);
  for (const auto& l : decision.launches) pool.launch(l, now);
}

}  // namespace cloudplan
