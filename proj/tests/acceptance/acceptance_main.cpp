// SPDX-License-Identifier: Apache-2.0
// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cloudplan/cli.hpp"
#include "cloudplan/predictor.hpp"
#include "cloudplan/reservation.hpp"
#include "cloudplan/simulator.hpp"
#include "cloudplan/spa.hpp"
#include "unit/oracles.hpp"
#include "unit/test_support.hpp"

using namespace cloudplan;
using cloudplan::testing::make_catalog;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// r* against brute force over random single-type instances.
Outcome ac1() {
  std::mt19937_64 rng(20241);
  const auto start = std::chrono::steady_clock::now();
  int mismatches = 0;
  int cost_mismatches = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const auto points = std::uniform_int_distribution<int>(1, 200)(rng);
    const auto top = std::uniform_int_distribution<std::int64_t>(points, 600)(rng);
    std::set<std::int64_t> levels;
    while (static_cast<int>(levels.size()) < points) levels.insert(std::uniform_int_distribution<std::int64_t>(0, top)(rng));
    std::vector<std::int64_t> support(levels.begin(), levels.end());
    std::vector<std::uint64_t> weights(support.size());
    for (auto& w : weights) w = std::uniform_int_distribution<std::uint64_t>(1, 1000)(rng);

    // Uniform micro-unit prices with on-demand above usage.
    std::uniform_int_distribution<std::int64_t> price(0, 1'000'000);
    const auto up = price(rng);
    const auto use = price(rng);
    const auto od = std::uniform_int_distribution<std::int64_t>(use + 1, 2'000'001)(rng);
    const TypeRates rates{up, use, od, 1};

    const auto dist = DemandDistribution::from_weights(support, weights);
    const auto got = optimal_reservation_single(dist, rates).r_star;
    const auto want = oracle::brute_force_r_star(support, weights, support.back(), up, use, od);
    if (got != want) ++mismatches;

    // The library's own cost function must agree on the argmin as well.
    std::int64_t lib_best = 0;
    auto best = expected_cost_single(dist, 0, rates);
    for (std::int64_t r = 1; r <= support.back(); ++r) {
      const auto c = expected_cost_single(dist, r, rates);
      if (c < best) {
        best = c;
        lib_best = r;
      }
    }
    if (lib_best != want) ++cost_mismatches;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {mismatches == 0 && cost_mismatches == 0 && secs < 5.0,
          fmt("1000 instances, %d r* mismatches, %d cost-argmin mismatches, %.2f s (limit 5 s)", mismatches,
              cost_mismatches, secs)};
}

// Both covering programs against exhaustive enumeration.
Outcome ac2() {
  std::mt19937_64 rng(7331);
  int mismatches = 0;
  const int instances = 600;
  for (int inst = 0; inst < instances; ++inst) {
    const auto m = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<cloudplan::testing::TypeSpec> specs;
    for (int i = 0; i < m; ++i) {
      specs.push_back({"t" + std::to_string(i), std::uniform_int_distribution<std::int64_t>(1, 32)(rng),
                       std::uniform_int_distribution<int>(1, 400)(rng) * 0.25,
                       std::uniform_int_distribution<int>(0, 100)(rng) * 0.001,
                       std::uniform_int_distribution<int>(1, 400)(rng) * 0.05});
    }
    const auto cat = make_catalog(specs);
    const auto demand = std::uniform_int_distribution<std::int64_t>(0, 100)(rng);

    std::vector<oracle::Item> up_items, od_items;
    for (std::size_t i = 0; i < cat.size(); ++i) {
      up_items.push_back({cat.type(i).capacity, cat.pricing(i).upfront_total.micros()});
      od_items.push_back({cat.type(i).capacity, cat.pricing(i).on_demand_per_quantum.micros()});
    }
    const auto want_up = oracle::enumerate_cover(up_items, demand);
    const auto got_up = solve_covering_ilp(cat, demand);
    if (!want_up || got_up.counts != want_up->counts || got_up.cost != want_up->cost) ++mismatches;

    if (demand > 0) {
      const auto want_od = oracle::enumerate_cover(od_items, demand);
      const auto got_od = ilp1_on_demand(demand, cat);
      if (!want_od || got_od.counts != want_od->counts || got_od.cost != want_od->cost) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%d instances (M<=4, C<=32, demand<=100), %d mismatches", instances, mismatches)};
}

// Two-level demand instance with closed-form expectations.
Outcome ac3() {
  // 0.1 upfront per interval over an 8760-interval lease, usage 0.1, on-demand
  // 0.5 per one-interval quantum.
  const auto cat = make_catalog({{"c3", 3, 876.0, 0.1, 0.5}}, 8760, 1);
  const auto dist = DemandDistribution::from_weights({9, 15}, {9, 1});
  const DemandTrace trace{300.0, sample_demand(dist, 20'000, 0)};

  const auto plan = plan_reservation(build_distribution(trace), cat);
  SimConfig cfg;
  cfg.launch_latency = 1;
  cfg.min_rental = 1;
  const auto reports = compare_policies(cat, cfg, trace, all_policies());
  auto mean_of = [&](Policy p) {
    for (const auto& r : reports) {
      if (r.policy == p) return r.mean_cost_per_interval();
    }
    return std::nan("");
  };
  const double oracle_cost = mean_of(Policy::oracle);
  const double od_cost = mean_of(Policy::all_on_demand);
  const double full_cost = mean_of(Policy::full_reservation);
  const double kf_cost = mean_of(Policy::two_phase);

  const bool reserves_3 = plan.quantities == std::vector<std::int64_t>{3};
  const bool pass = reserves_3 && within(oracle_cost, 0.7, 0.02) && within(od_cost, 1.6, 0.02) &&
                    within(full_cost, 0.82, 0.02) && kf_cost > oracle_cost && kf_cost < od_cost;
  return {pass, fmt("reserve=%lld oracle=%.4f (0.7) all_on_demand=%.4f (1.6) full_reservation=%.4f (0.82) "
                    "two_phase=%.4f, tolerance 2%%, 20000 intervals",
                    static_cast<long long>(plan.quantities.empty() ? -1 : plan.quantities[0]), oracle_cost, od_cost,
                    full_cost, kf_cost)};
}

// SPA branch order over random pool states.
Outcome ac4() {
  std::mt19937_64 rng(99);
  const auto cat = make_catalog({{"a", 1, 1.0, 0.05, 0.3}, {"b", 3, 2.5, 0.1, 0.8}, {"c", 7, 5.0, 0.2, 1.5}});
  auto draw = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
  int bad_branch = 0;
  int bad_capacity = 0;
  std::int64_t fired[4] = {0, 0, 0, 0};
  const int triples = 100'000;
  for (int k = 0; k < triples; ++k) {
    std::vector<std::int64_t> contract{draw(0, 4), draw(0, 4), draw(0, 3)};
    VmPool pool(cat, contract, PoolSettings{1, 1, 1});
    for (std::size_t i = 0; i < cat.size(); ++i) {
      const auto running = draw(0, contract[i]);
      const auto launching = draw(0, contract[i] - running);
      pool.launch(LaunchOrder{i, Tier::reserved, running}, -1);
      pool.launch(LaunchOrder{i, Tier::on_demand, draw(0, 2)}, -1);
      pool.launch(LaunchOrder{i, Tier::reserved, launching}, 0);
    }
    pool.advance(0);
    const auto r_r = pool.reserved_capacity();
    const auto r_c = pool.capacity_of();
    const auto r_p = draw(0, r_r + 15);

    const bool line1 = r_r < r_p;
    const bool line4 = !line1 && r_c < r_p;
    const bool line6 = !line1 && !line4 && r_c > r_p;
    const bool none = !line1 && !line4 && !line6;
    const auto d = spa_step(pool, r_c, r_p, cat, 0);
    const bool matches = (d.scenario == Scenario::on_demand) == line1 &&
                         (d.scenario == Scenario::adjust_reserved) == line4 &&
                         (d.scenario == Scenario::shutdown) == line6 && (d.scenario == Scenario::no_op) == none;
    if (!matches || line1 + line4 + line6 + none != 1) ++bad_branch;
    ++fired[static_cast<int>(d.scenario)];

    apply_decision(pool, d, 0);
    if ((line1 || line4) && (pool.planned_capacity() < r_p || d.resulting_capacity < r_p)) ++bad_capacity;
  }
  const bool all_fired = std::all_of(std::begin(fired), std::end(fired), [](std::int64_t n) { return n > 0; });
  return {bad_branch == 0 && bad_capacity == 0 && all_fired,
          fmt("%d triples, %d branch errors, %d capacity shortfalls; on_demand=%lld adjust=%lld shutdown=%lld "
              "no_op=%lld",
              triples, bad_branch, bad_capacity, static_cast<long long>(fired[0]), static_cast<long long>(fired[1]),
              static_cast<long long>(fired[2]), static_cast<long long>(fired[3]))};
}

// Quantum rounding and ledger identity.
Outcome ac5() {
  const auto minute = make_catalog({{"a", 1, 1.0, 0.1, 0.6}}, 60, 60);
  VmPool pool(minute, {0}, PoolSettings{1, 1, 60});
  pool.launch(LaunchOrder{0, Tier::on_demand, 1}, -1);
  CostLedger ledger;
  for (std::int64_t t = 0; t < 61; ++t) {
    pool.advance(t);
    IntervalRow row;
    account_interval(pool, ledger, t, row);
  }
  const auto quanta = ledger.on_demand_charges.micros() / minute.pricing(0).on_demand_per_quantum.micros();

  std::mt19937_64 rng(5);
  int runs = 0;
  int broken = 0;
  for (int k = 0; k < 12; ++k) {
    const auto q = std::uniform_int_distribution<std::int64_t>(1, 12)(rng);
    const auto cat = make_catalog({{"s", 2, 30.0, 0.013, 0.11}, {"m", 5, 71.0, 0.029, 0.26}, {"l", 11, 150.0, 0.07, 0.55}},
                                  1000, q);
    std::vector<std::int64_t> s(500);
    std::uniform_int_distribution<std::int64_t> d(0, 60);
    for (auto& x : s) x = d(rng);
    SimConfig cfg;
    cfg.launch_latency = k % 3;
    for (const auto& r : compare_policies(cat, cfg, DemandTrace{300.0, s}, all_policies())) {
      ++runs;
      Money rows;
      for (const auto& row : r.ledger.rows) rows += row.cost_upfront + row.cost_usage + row.cost_on_demand;
      if (r.ledger.total != r.ledger.component_sum() || rows != r.ledger.total) ++broken;
    }
  }
  return {quanta == 2 && broken == 0,
          fmt("61 intervals at quantum 60 billed %lld quanta (want 2); ledger identity broken in %d of %d runs",
              static_cast<long long>(quanta), broken, runs)};
}

// Filter convergence, gain bounds, shift-equivariance.
Outcome ac6() {
  auto s = kf_init(0.01, 1.0);
  for (int k = 0; k < 50; ++k) s = kf_step(s, 5.0).state;
  const double err = std::abs(s.x_hat - 5.0);

  std::mt19937_64 rng(0);
  bool gain_ok = true;
  double worst_shift = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double q = std::pow(10.0, std::uniform_real_distribution<double>(-4, 3)(rng));
    const double r = std::pow(10.0, std::uniform_real_distribution<double>(-4, 3)(rng));
    const double shift = std::uniform_real_distribution<double>(-100, 100)(rng);
    auto a = kf_init(q, r);
    auto b = kf_init(q, r);
    std::uniform_real_distribution<double> z(0, 100);
    for (int t = 0; t < 500; ++t) {
      const double x = z(rng);
      const auto sa = kf_step(a, x);
      const auto sb = kf_step(b, x + shift + 100.0);
      // The first step seeds the state from the measurement; gain applies after.
      if (t > 0 && !(sa.gain > 0.0 && sa.gain < 1.0)) gain_ok = false;
      worst_shift = std::max(worst_shift, std::abs((sb.prediction - sa.prediction) - (shift + 100.0)));
      a = sa.state;
      b = sb.state;
    }
  }
  return {err < 1e-6 && gain_ok && worst_shift <= 1e-9,
          fmt("|x-5| after 50 steps = %.3g (limit 1e-6); gain in (0,1): %s; worst shift error %.3g (limit 1e-9)", err,
              gain_ok ? "yes" : "no", worst_shift)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Identical manifests give identical bytes.
Outcome ac7() {
  const auto root = fs::temp_directory_path() / ("cloudplan_acceptance_" + std::to_string(std::random_device{}()));
  const std::string data = CLOUDPLAN_DATA_DIR;
  std::vector<std::string> files{"report.json", "intervals.csv", "decisions.jsonl", "manifest.json"};
  bool same = true;
  int exit_codes = 0;
  for (const char* policy : {"two_phase", "reactive", "oracle"}) {
    for (const char* run : {"a", "b"}) {
      std::ostringstream out, err;
      exit_codes += run_cli({"cloudplan", "--catalog", data + "/catalog.json", "--trace", data + "/trace.csv", "--seed",
                             "3", "--out", (root / policy / run).string(), "simulate", "--policy", policy},
                            out, err);
    }
    for (const auto& f : files) same = same && slurp(root / policy / "a" / f) == slurp(root / policy / "b" / f);
  }
  for (const char* run : {"a", "b"}) {
    std::ostringstream out, err;
    exit_codes += run_cli({"cloudplan", "--catalog", data + "/catalog.json", "--synthetic", "40:0.5,90:0.4,160:0.1",
                           "--intervals", "3000", "--seed", "11", "--out", (root / "cmp" / run).string(), "compare",
                           "--policies", "two_phase,all_on_demand,oracle"},
                          out, err);
  }
  for (const char* f : {"comparison.csv", "comparison.txt", "comparison.json"}) {
    same = same && slurp(root / "cmp" / "a" / f) == slurp(root / "cmp" / "b" / f);
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {same && exit_codes == 0, fmt("4 paired runs, outputs %s, nonzero exits %d",
                                       same ? "byte-identical" : "differ", exit_codes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 reservation optimum matches brute force", ac1},
      {"AC2 covering programs match enumeration", ac2},
      {"AC3 two-level demand cost targets", ac3},
      {"AC4 planner branch conformance", ac4},
      {"AC5 quantum billing and ledger identity", ac5},
      {"AC6 Kalman sanity", ac6},
      {"AC7 deterministic reports", ac7},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
