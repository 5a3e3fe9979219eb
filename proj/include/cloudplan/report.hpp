// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cloudplan/catalog.hpp"
#include "cloudplan/demand.hpp"
#include "cloudplan/reservation.hpp"
#include "cloudplan/simulator.hpp"

namespace cloudplan {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.3.0";

// Everything needed to reproduce an output artifact. Contains no timestamps
// or host data, so equal manifests mean byte-equal reports.
struct RunManifest {
  std::string command;
  Json config = Json::object();
  std::vector<std::pair<std::string, std::string>> input_digests;  // (label, sha256 hex)
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;

  Json to_json() const;
};

// Lowercase hex SHA-256 of the file contents. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

Json plan_to_json(const ReservationPlan& plan, const Catalog& catalog);
Json decision_to_json(const SpaDecision& d, std::int64_t epoch, const Catalog& catalog);
Json report_to_json(const SimulationReport& report, const Catalog& catalog);

// Header: interval,r_m,r_p,r_c,r_r,scenario,cost_upfront,cost_usage,cost_od,unserved
void write_interval_csv(std::ostream& out, const SimulationReport& report);
// One JSON object per line, one line per decision epoch.
void write_decision_log(std::ostream& out, const SimulationReport& report, const Catalog& catalog);

// Header: policy,total,upfront,usage,on_demand,unserved,intervals,
//         reserved_mean,reserved_p95,on_demand_mean,on_demand_p95
void write_comparison_csv(std::ostream& out, const std::vector<SimulationReport>& reports);
void write_comparison_table(std::ostream& out, const std::vector<SimulationReport>& reports);

// Summary statistics and the empirical distribution of a trace.
Json analyze_trace(const DemandTrace& trace);

// Money as a JSON number with at most six decimals.
Json money_json(Money m);

}  // namespace cloudplan
