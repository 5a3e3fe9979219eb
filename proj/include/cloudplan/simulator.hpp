// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cloudplan/catalog.hpp"
#include "cloudplan/demand.hpp"
#include "cloudplan/money.hpp"
#include "cloudplan/reservation.hpp"
#include "cloudplan/spa.hpp"
#include "cloudplan/vm_pool.hpp"

namespace cloudplan {

// two_phase        long-term plan + Kalman forecast
// reactive         long-term plan + last measured demand as forecast
// oracle           long-term plan + exact next-interval demand
// all_on_demand    no reservation, exact next-interval demand
// full_reservation reservation covering peak demand, exact next-interval demand
//
// The two baselines use the exact forecast so they isolate the value of the
// reservation choice from forecasting error.
enum class Policy { all_on_demand, full_reservation, oracle, reactive, two_phase };

std::string_view to_string(Policy p);
std::optional<Policy> parse_policy(std::string_view name);
std::span<const Policy> all_policies();
std::string policy_names();  // "all_on_demand|full_reservation|..."

struct SimConfig {
  Policy policy = Policy::two_phase;
  // Overrides the plan the policy would derive from the trace.
  std::optional<ReservationPlan> plan;
  std::int64_t launch_latency = 1;
  std::optional<std::int64_t> min_rental;  // defaults to the billing quantum
  std::optional<double> kf_q;              // defaults from the trace prefix
  std::optional<double> kf_r;
  double headroom = 1.0;
  std::uint64_t seed = 0;
};

struct IntervalRow {
  std::int64_t interval = 0;
  std::int64_t r_m = 0;
  std::int64_t r_p = 0;  // forecast made after this interval
  std::int64_t r_c = 0;  // running capacity during this interval
  std::int64_t r_r = 0;
  Scenario scenario = Scenario::no_op;  // decision taken after this interval
  Money cost_upfront;
  Money cost_usage;
  Money cost_on_demand;
  std::int64_t unserved = 0;
  std::int64_t reserved_running = 0;
  std::int64_t on_demand_running = 0;
};

struct CostLedger {
  Money upfront_amortized;
  Money reserved_usage;
  Money on_demand_charges;
  Money total;  // accumulated independently of the components
  std::int64_t unserved_demand_interval_sum = 0;
  std::vector<IntervalRow> rows;

  Money component_sum() const { return upfront_amortized + reserved_usage + on_demand_charges; }
};

// Bills interval `interval` into `ledger` and `row`:
//  - upfront: the contract's total upfront spread over the lease, as
//    floor(U * (t + 1) / L) - floor(U * t / L) micro-units, charged whether
//    or not the VMs run;
//  - usage: each running reserved VM pays its per-interval usage;
//  - on-demand: a running on-demand VM pays one full quantum each time it
//    enters a new quantum (ceil billing). Launching VMs are not billed.
void account_interval(const VmPool& pool, CostLedger& ledger, std::int64_t interval, IntervalRow& row);

struct TierUtilization {
  Tier tier = Tier::reserved;
  double mean = 0.0;
  std::int64_t p95 = 0;
  std::int64_t max = 0;
};

struct SimulationReport {
  Policy policy = Policy::two_phase;
  ReservationPlan plan;
  CostLedger ledger;
  std::int64_t intervals = 0;
  std::vector<TierUtilization> utilization;  // reserved, then on_demand
  std::vector<SpaDecision> decisions;        // decisions[k] taken at epoch k - 1
  double kf_q = 0.0;                         // filter parameters used (two_phase)
  double kf_r = 0.0;

  double mean_cost_per_interval() const;
};

// Plan the policy uses when SimConfig::plan is unset.
ReservationPlan policy_plan(Policy policy, const Catalog& catalog, const DemandTrace& trace);

// Replays the trace: a decision epoch precedes interval 0, then after each
// interval t the pool is billed, the forecaster observes r_m(t), and the
// planner decides for t + 1. Throws std::invalid_argument on an empty trace.
SimulationReport run_simulation(const Catalog& catalog, const SimConfig& config, const DemandTrace& trace);

// One report per policy, run concurrently, ordered by policy name.
std::vector<SimulationReport> compare_policies(const Catalog& catalog, const SimConfig& base,
                                               const DemandTrace& trace, std::span<const Policy> policies);

}  // namespace cloudplan
