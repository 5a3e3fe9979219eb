// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/simulator.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <memory>
#include <stdexcept>

#include "cloudplan/predictor.hpp"

namespace cloudplan {

namespace {

constexpr std::array kPolicies{Policy::all_on_demand, Policy::full_reservation, Policy::oracle, Policy::reactive,
                               Policy::two_phase};

using i128 = __int128;

std::int64_t amortized(i128 upfront_total, std::int64_t t, std::int64_t lease) {
  return static_cast<std::int64_t>(upfront_total * t / lease);
}

TierUtilization utilization_of(Tier tier, std::vector<std::int64_t> counts) {
  TierUtilization u{tier, 0.0, 0, 0};
  if (counts.empty()) return u;
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  u.mean = static_cast<double>(sum) / static_cast<double>(counts.size());
  std::sort(counts.begin(), counts.end());
  const auto n = counts.size();
  const auto rank = (95 * n + 99) / 100;  // nearest rank, 1-based
  u.p95 = counts[rank - 1];
  u.max = counts.back();
  return u;
}

}  // namespace

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::all_on_demand: return "all_on_demand";
    case Policy::full_reservation: return "full_reservation";
    case Policy::oracle: return "oracle";
    case Policy::reactive: return "reactive";
    case Policy::two_phase: return "two_phase";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view name) {
  for (auto p : kPolicies) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::span<const Policy> all_policies() { return kPolicies; }

std::string policy_names() {
  std::string out;
  for (auto p : kPolicies) {
    if (!out.empty()) out += '|';
    out += to_string(p);
  }
  return out;
}

void account_interval(const VmPool& pool, CostLedger& ledger, std::int64_t interval, IntervalRow& row) {
  const auto& catalog = pool.catalog();
  i128 upfront_total = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    upfront_total += static_cast<i128>(pool.contract()[i]) * catalog.pricing(i).upfront_total.micros();
  }
  const auto lease = catalog.lease_period();
  const auto upfront = Money::from_micros(amortized(upfront_total, interval + 1, lease) -
                                          amortized(upfront_total, interval, lease));

  Money usage;
  Money on_demand;
  const auto quantum = catalog.billing_quantum();
  for (const auto& vm : pool.instances()) {
    if (vm.status != VmStatus::running) continue;
    const auto& price = catalog.pricing(vm.type);
    if (vm.tier == Tier::reserved) {
      usage += price.reserved_usage_per_interval;
    } else if ((interval - vm.running_since) % quantum == 0) {
      on_demand += price.on_demand_per_quantum;
    }
  }

  row.cost_upfront = upfront;
  row.cost_usage = usage;
  row.cost_on_demand = on_demand;
  ledger.upfront_amortized += upfront;
  ledger.reserved_usage += usage;
  ledger.on_demand_charges += on_demand;
  ledger.total += upfront + usage + on_demand;
}

double SimulationReport::mean_cost_per_interval() const {
  return intervals == 0 ? 0.0 : ledger.total.units() / static_cast<double>(intervals);
}

ReservationPlan policy_plan(Policy policy, const Catalog& catalog, const DemandTrace& trace) {
  switch (policy) {
    case Policy::all_on_demand:
      return ReservationPlan::empty(catalog);
    case Policy::full_reservation: {
      auto plan = ReservationPlan::empty(catalog);
      const auto peak = *std::max_element(trace.samples.begin(), trace.samples.end());
      const auto cover = solve_covering_ilp(catalog, peak);
      plan.quantities = cover.counts;
      plan.reserved_capacity = cover.capacity;
      plan.expected_cost_per_interval = expected_cost_mixed(build_distribution(trace), catalog, cover.counts).value();
      return plan;
    }
    case Policy::oracle:
    case Policy::reactive:
    case Policy::two_phase:
      return plan_reservation(build_distribution(trace), catalog);
  }
  throw std::logic_error("policy_plan: unknown policy");
}

SimulationReport run_simulation(const Catalog& catalog, const SimConfig& config, const DemandTrace& trace) {
  if (trace.samples.empty()) throw std::invalid_argument("run_simulation: empty trace");
  const auto& samples = trace.samples;
  const auto horizon = static_cast<std::int64_t>(samples.size());

  SimulationReport report;
  report.policy = config.policy;
  report.plan = config.plan ? *config.plan : policy_plan(config.policy, catalog, trace);
  report.intervals = horizon;
  if (report.plan.quantities.size() != catalog.size()) {
    throw std::invalid_argument("run_simulation: plan does not match catalog");
  }

  PoolSettings settings;
  settings.launch_latency = config.launch_latency;
  settings.billing_quantum = catalog.billing_quantum();
  settings.min_rental = config.min_rental.value_or(catalog.billing_quantum());
  VmPool pool(catalog, report.plan.quantities, settings);

  std::unique_ptr<DemandForecaster> forecaster;
  switch (config.policy) {
    case Policy::two_phase: {
      const auto defaults = default_kalman_params(samples);
      report.kf_q = config.kf_q.value_or(defaults.q);
      report.kf_r = config.kf_r.value_or(defaults.r_noise);
      forecaster = std::make_unique<KalmanForecaster>(report.kf_q, report.kf_r, config.headroom);
      break;
    }
    case Policy::reactive:
      forecaster = std::make_unique<ReactiveForecaster>();
      break;
    case Policy::oracle:
    case Policy::all_on_demand:
    case Policy::full_reservation:
      forecaster = std::make_unique<OracleForecaster>(samples);
      break;
  }

  // Provisioning epoch before the first interval.
  {
    auto d = spa_step(pool, 0, forecaster->forecast(), catalog, -1);
    apply_decision(pool, d, -1);
    report.decisions.push_back(std::move(d));
  }

  std::vector<std::int64_t> reserved_counts;
  std::vector<std::int64_t> on_demand_counts;
  reserved_counts.reserve(samples.size());
  on_demand_counts.reserve(samples.size());
  auto& ledger = report.ledger;
  ledger.rows.reserve(samples.size());

  for (std::int64_t t = 0; t < horizon; ++t) {
    pool.advance(t);
    IntervalRow row;
    row.interval = t;
    row.r_m = samples[static_cast<std::size_t>(t)];
    row.r_c = pool.capacity_of();
    row.r_r = pool.reserved_capacity();
    row.unserved = std::max<std::int64_t>(row.r_m - row.r_c, 0);
    row.reserved_running = pool.running_count(Tier::reserved);
    row.on_demand_running = pool.running_count(Tier::on_demand);
    ledger.unserved_demand_interval_sum += row.unserved;
    account_interval(pool, ledger, t, row);

    forecaster->observe(row.r_m);
    row.r_p = forecaster->forecast();
    if (t + 1 < horizon) {
      auto d = spa_step(pool, row.r_m, row.r_p, catalog, t);
      apply_decision(pool, d, t);
      row.scenario = d.scenario;
      report.decisions.push_back(std::move(d));
    }
    reserved_counts.push_back(row.reserved_running);
    on_demand_counts.push_back(row.on_demand_running);
    ledger.rows.push_back(row);
  }

  report.utilization.push_back(utilization_of(Tier::reserved, std::move(reserved_counts)));
  report.utilization.push_back(utilization_of(Tier::on_demand, std::move(on_demand_counts)));
  return report;
}

std::vector<SimulationReport> compare_policies(const Catalog& catalog, const SimConfig& base,
                                               const DemandTrace& trace, std::span<const Policy> policies) {
  if (policies.empty()) throw std::invalid_argument("compare_policies: empty policy list");
  std::vector<Policy> unique(policies.begin(), policies.end());
  std::sort(unique.begin(), unique.end(), [](Policy a, Policy b) { return to_string(a) < to_string(b); });
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

  std::vector<std::future<SimulationReport>> runs;
  runs.reserve(unique.size());
  for (auto p : unique) {
    SimConfig cfg = base;
    cfg.policy = p;
    // A caller-supplied plan only applies to the policies that use the long-term plan.
    if (p == Policy::all_on_demand || p == Policy::full_reservation) cfg.plan.reset();
    runs.push_back(std::async(std::launch::async, [&catalog, &trace, cfg] { return run_simulation(catalog, cfg, trace); }));
  }
  std::vector<SimulationReport> out;
  out.reserve(runs.size());
  for (auto& f : runs) out.push_back(f.get());
  return out;
}

}  // namespace cloudplan
