// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cloudplan/errors.hpp"

namespace cloudplan {

namespace {

std::string to_hex(const unsigned char* data, unsigned int len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0xF]);
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Json utilization_json(const SimulationReport& report) {
  Json out = Json::array();
  for (const auto& u : report.utilization) {
    out.push_back(Json{{"tier", to_string(u.tier)}, {"mean", u.mean}, {"p95", u.p95}, {"max", u.max}});
  }
  return out;
}

const TierUtilization& util(const SimulationReport& r, Tier tier) {
  return *std::find_if(r.utilization.begin(), r.utilization.end(), [&](const auto& u) { return u.tier == tier; });
}

}  // namespace

Json money_json(Money m) { return Json(m.units()); }

Json RunManifest::to_json() const {
  Json digests = Json::object();
  for (const auto& [label, hex] : input_digests) digests[label] = hex;
  return Json{{"command", command},
              {"config", config},
              {"inputs", digests},
              {"seed", seed},
              {"tool_version", tool_version}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  return to_hex(digest, len);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

Json plan_to_json(const ReservationPlan& plan, const Catalog& catalog) {
  Json quantities = Json::object();
  for (std::size_t i = 0; i < catalog.size(); ++i) quantities[catalog.type(i).id] = plan.quantities.at(i);
  return Json{{"lease_period", plan.lease_period},
              {"quantities", quantities},
              {"reserved_capacity", plan.reserved_capacity},
              {"expected_cost_per_interval", plan.expected_cost_per_interval},
              {"best_cp_type", plan.best_cp_type},
              {"r_star", plan.r_star},
              {"window", Json::array({plan.window_lo, plan.window_hi})}};
}

Json decision_to_json(const SpaDecision& d, std::int64_t epoch, const Catalog& catalog) {
  Json launches = Json::array();
  for (const auto& l : d.launches) {
    launches.push_back(Json{{"type", catalog.type(l.type).id}, {"tier", to_string(l.tier)}, {"count", l.count}});
  }
  return Json{{"interval", epoch},
              {"scenario", to_string(d.scenario)},
              {"r_m", d.r_m},
              {"r_p", d.r_p},
              {"r_c", d.r_c},
              {"r_r", d.r_r},
              {"launches", launches},
              {"shutdowns", d.shutdowns},
              {"capacity_after", d.resulting_capacity},
              {"capped_by_min_rental", d.capped_by_min_rental}};
}

Json report_to_json(const SimulationReport& report, const Catalog& catalog) {
  const auto& l = report.ledger;
  Json out{{"policy", to_string(report.policy)},
           {"totals",
            Json{{"upfront", money_json(l.upfront_amortized)},
                 {"usage", money_json(l.reserved_usage)},
                 {"on_demand", money_json(l.on_demand_charges)},
                 {"total", money_json(l.total)}}},
           {"mean_cost_per_interval", report.mean_cost_per_interval()},
           {"unserved", l.unserved_demand_interval_sum},
           {"intervals", report.intervals},
           {"vm_utilization", utilization_json(report)},
           {"plan", plan_to_json(report.plan, catalog)}};
  if (report.policy == Policy::two_phase) out["kalman"] = Json{{"q", report.kf_q}, {"r", report.kf_r}};
  return out;
}

void write_interval_csv(std::ostream& out, const SimulationReport& report) {
  out << "interval,r_m,r_p,r_c,r_r,scenario,cost_upfront,cost_usage,cost_od,unserved\n";
  for (const auto& r : report.ledger.rows) {
    out << r.interval << ',' << r.r_m << ',' << r.r_p << ',' << r.r_c << ',' << r.r_r << ','
        << to_string(r.scenario) << ',' << r.cost_upfront.to_string() << ',' << r.cost_usage.to_string() << ','
        << r.cost_on_demand.to_string() << ',' << r.unserved << '\n';
  }
}

void write_decision_log(std::ostream& out, const SimulationReport& report, const Catalog& catalog) {
  std::int64_t epoch = -1;
  for (const auto& d : report.decisions) out << decision_to_json(d, epoch++, catalog).dump() << '\n';
}

void write_comparison_csv(std::ostream& out, const std::vector<SimulationReport>& reports) {
  out << "policy,total,upfront,usage,on_demand,unserved,intervals,reserved_mean,reserved_p95,on_demand_mean,"
         "on_demand_p95\n";
  for (const auto& r : reports) {
    const auto& l = r.ledger;
    const auto& res = util(r, Tier::reserved);
    const auto& od = util(r, Tier::on_demand);
    out << to_string(r.policy) << ',' << l.total.to_string() << ',' << l.upfront_amortized.to_string() << ','
        << l.reserved_usage.to_string() << ',' << l.on_demand_charges.to_string() << ','
        << l.unserved_demand_interval_sum << ',' << r.intervals << ',' << fixed(res.mean, 4) << ',' << res.p95
        << ',' << fixed(od.mean, 4) << ',' << od.p95 << '\n';
  }
}

void write_comparison_table(std::ostream& out, const std::vector<SimulationReport>& reports) {
  out << std::left << std::setw(18) << "policy" << std::right << std::setw(16) << "total" << std::setw(14)
      << "per interval" << std::setw(14) << "upfront" << std::setw(14) << "usage" << std::setw(14) << "on-demand"
      << std::setw(10) << "unserved" << std::setw(10) << "res.mean" << std::setw(10) << "od.mean" << '\n';
  for (const auto& r : reports) {
    const auto& l = r.ledger;
    out << std::left << std::setw(18) << to_string(r.policy) << std::right << std::setw(16) << fixed(l.total.units(), 4)
        << std::setw(14) << fixed(r.mean_cost_per_interval(), 4) << std::setw(14)
        << fixed(l.upfront_amortized.units(), 4) << std::setw(14) << fixed(l.reserved_usage.units(), 4)
        << std::setw(14) << fixed(l.on_demand_charges.units(), 4) << std::setw(10) << l.unserved_demand_interval_sum
        << std::setw(10) << fixed(util(r, Tier::reserved).mean, 2) << std::setw(10)
        << fixed(util(r, Tier::on_demand).mean, 2) << '\n';
  }
}

Json analyze_trace(const DemandTrace& trace) {
  const auto dist = build_distribution(trace);
  const auto& s = trace.samples;
  std::vector<std::int64_t> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  double mean = 0.0;
  for (auto v : s) mean += static_cast<double>(v);
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (auto v : s) var += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;

  Json histogram = Json::array();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    histogram.push_back(Json{{"demand", dist.support()[i]}, {"count", dist.weights()[i]}, {"probability", dist.probability(i)}});
  }
  return Json{{"samples", n},
              {"interval_seconds", trace.interval_seconds},
              {"min", sorted.front()},
              {"max", sorted.back()},
              {"mean", mean},
              {"stddev", std::sqrt(var)},
              {"p95", sorted[(95 * n + 99) / 100 - 1]},
              {"distribution", histogram}};
}

}  // namespace cloudplan
