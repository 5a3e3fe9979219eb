// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "cloudplan/catalog.hpp"
#include "cloudplan/demand.hpp"
#include "cloudplan/errors.hpp"
#include "cloudplan/report.hpp"
#include "cloudplan/reservation.hpp"
#include "cloudplan/simulator.hpp"

namespace cloudplan {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string catalog;
  std::string trace;
  std::string synthetic;
  std::int64_t synthetic_intervals = 10'000;
  std::uint64_t seed = 0;
  double interval_seconds = 300.0;
  std::int64_t launch_latency = 1;
  std::optional<std::int64_t> min_rental;
  std::optional<double> kf_q;
  std::optional<double> kf_r;
  double headroom = 1.0;
  std::string out_dir;
  std::string window;
  std::string reducer = "max";
  std::string policy = "two_phase";
  std::string policies;
  std::string format = "table";
};

// "9:0.9,15:0.1" -> distribution over demand levels.
DemandDistribution parse_synthetic(const std::string& text) {
  std::vector<std::pair<std::int64_t, double>> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("--synthetic", "expected demand:probability pairs");
    std::int64_t level = 0;
    const auto* begin = item.data();
    if (std::from_chars(begin, begin + colon, level).ec != std::errc{}) {
      throw ValidationError("--synthetic", "bad demand level '" + item.substr(0, colon) + "'");
    }
    double p = 0.0;
    try {
      p = std::stod(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw ValidationError("--synthetic", "bad probability in '" + item + "'");
    }
    points.emplace_back(level, p);
  }
  std::sort(points.begin(), points.end());
  std::vector<std::int64_t> support;
  std::vector<double> probs;
  for (const auto& [v, p] : points) {
    support.push_back(v);
    probs.push_back(p);
  }
  try {
    return DemandDistribution::from_probabilities(std::move(support), probs);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("--synthetic", e.what());
  }
}

struct Inputs {
  std::optional<Catalog> catalog;
  DemandTrace trace;
  RunManifest manifest;
};

Json options_json(const Options& o, const std::string& command) {
  Json cfg{{"interval_seconds", o.interval_seconds},
           {"launch_latency", o.launch_latency},
           {"headroom", o.headroom}};
  if (o.min_rental) cfg["min_rental"] = *o.min_rental;
  if (o.kf_q) cfg["kf_q"] = *o.kf_q;
  if (o.kf_r) cfg["kf_r"] = *o.kf_r;
  if (!o.synthetic.empty()) {
    cfg["synthetic"] = o.synthetic;
    cfg["synthetic_intervals"] = o.synthetic_intervals;
  }
  if (!o.window.empty()) {
    cfg["window"] = o.window;
    cfg["reducer"] = o.reducer;
  }
  if (command == "simulate") cfg["policy"] = o.policy;
  if (command == "compare") cfg["policies"] = o.policies;
  return cfg;
}

Inputs load_inputs(const Options& o, const std::string& command, bool need_catalog) {
  Inputs in;
  in.manifest.command = command;
  in.manifest.seed = o.seed;
  in.manifest.config = options_json(o, command);
  if (!o.catalog.empty()) {
    in.catalog = load_catalog(o.catalog);
    in.manifest.input_digests.emplace_back("catalog", sha256_file(o.catalog));
  } else if (need_catalog) {
    throw ValidationError("--catalog", "required");
  }
  if (!(o.interval_seconds > 0.0)) throw ValidationError("--interval-seconds", "must be > 0");
  if (!o.trace.empty()) {
    in.trace = load_trace(o.trace, o.interval_seconds);
    in.manifest.input_digests.emplace_back("trace", sha256_file(o.trace));
  } else if (!o.synthetic.empty()) {
    if (o.synthetic_intervals < 1) throw ValidationError("--intervals", "must be >= 1");
    const auto dist = parse_synthetic(o.synthetic);
    in.trace.interval_seconds = o.interval_seconds;
    in.trace.samples = sample_demand(dist, static_cast<std::size_t>(o.synthetic_intervals), o.seed);
  } else {
    throw ValidationError("--trace", "required (or --synthetic)");
  }
  return in;
}

DemandTrace maybe_aggregate(const Options& o, const DemandTrace& trace) {
  if (o.window.empty()) return trace;
  try {
    return aggregate(trace, parse_window(o.window), parse_reducer(o.reducer));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("--window", e.what());
  }
}

SimConfig sim_config(const Options& o) {
  if (o.launch_latency < 0) throw ValidationError("--launch-latency", "must be >= 0");
  if (o.min_rental && *o.min_rental < 1) throw ValidationError("--min-rental", "must be >= 1");
  if (o.kf_q && !(*o.kf_q > 0.0)) throw ValidationError("--kf-q", "must be > 0");
  if (o.kf_r && !(*o.kf_r > 0.0)) throw ValidationError("--kf-r", "must be > 0");
  if (!(o.headroom >= 1.0)) throw ValidationError("--headroom", "must be >= 1");
  SimConfig cfg;
  cfg.launch_latency = o.launch_latency;
  cfg.min_rental = o.min_rental;
  cfg.kf_q = o.kf_q;
  cfg.kf_r = o.kf_r;
  cfg.headroom = o.headroom;
  cfg.seed = o.seed;
  return cfg;
}

Policy require_policy(const std::string& name) {
  auto p = parse_policy(name);
  if (!p) throw ValidationError("--policy", "unknown policy '" + name + "'; valid: " + policy_names());
  return *p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

int cmd_plan_reserve(const Options& o, std::ostream& out, std::ostream& err) {
  auto in = load_inputs(o, "plan-reserve", true);
  const auto& catalog = *in.catalog;
  for (const auto& w : catalog.warnings()) err << "warning: " << w << '\n';
  const auto trace = maybe_aggregate(o, in.trace);
  const auto plan = plan_reservation(build_distribution(trace), catalog);

  Json doc = plan_to_json(plan, catalog);
  doc["manifest"] = in.manifest.to_json();
  const auto text = doc.dump(2) + "\n";
  out << text;
  if (!o.out_dir.empty()) write_file(prepare_out_dir(o.out_dir) / "plan.json", text);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const auto policy = require_policy(o.policy);
  auto in = load_inputs(o, "simulate", true);
  auto cfg = sim_config(o);
  cfg.policy = policy;
  const auto report = run_simulation(*in.catalog, cfg, in.trace);

  Json doc = report_to_json(report, *in.catalog);
  doc["manifest"] = in.manifest.to_json();
  const auto text = doc.dump(2) + "\n";
  out << text;
  if (!o.out_dir.empty()) {
    const auto dir = prepare_out_dir(o.out_dir);
    write_file(dir / "report.json", text);
    std::ostringstream csv;
    write_interval_csv(csv, report);
    write_file(dir / "intervals.csv", csv.str());
    std::ostringstream log;
    write_decision_log(log, report, *in.catalog);
    write_file(dir / "decisions.jsonl", log.str());
    write_file(dir / "manifest.json", in.manifest.to_json().dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream&) {
  std::vector<Policy> policies;
  std::stringstream ss(o.policies);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) policies.push_back(require_policy(name));
  }
  if (policies.empty()) throw ValidationError("--policies", "empty policy list; valid: " + policy_names());
  if (o.format != "table" && o.format != "csv") throw ValidationError("--format", "must be table or csv");

  auto in = load_inputs(o, "compare", true);
  const auto reports = compare_policies(*in.catalog, sim_config(o), in.trace, policies);

  std::ostringstream csv;
  write_comparison_csv(csv, reports);
  std::ostringstream table;
  write_comparison_table(table, reports);
  out << (o.format == "csv" ? csv.str() : table.str());

  if (!o.out_dir.empty()) {
    const auto dir = prepare_out_dir(o.out_dir);
    write_file(dir / "comparison.csv", csv.str());
    write_file(dir / "comparison.txt", table.str());
    Json doc{{"manifest", in.manifest.to_json()}, {"reports", Json::array()}};
    for (const auto& r : reports) doc["reports"].push_back(report_to_json(r, *in.catalog));
    write_file(dir / "comparison.json", doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream&) {
  auto in = load_inputs(o, "analyze", false);
  const auto trace = maybe_aggregate(o, in.trace);
  Json doc = analyze_trace(trace);
  if (in.catalog) {
    const auto best = best_cp_type(*in.catalog);
    const auto& type = in.catalog->type(best);
    Json units = analyze_trace(to_vm_units(trace, type.capacity));
    units["vm_type"] = type.id;
    units["capacity"] = type.capacity;
    doc["vm_units"] = units;
  }
  doc["manifest"] = in.manifest.to_json();
  const auto text = doc.dump(2) + "\n";
  out << text;
  if (!o.out_dir.empty()) write_file(prepare_out_dir(o.out_dir) / "analysis.json", text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cost-minimal IaaS reservation planning and on-demand simulation", "cloudplan"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--catalog", o.catalog, "VM catalog JSON");
  app.add_option("--trace", o.trace, "Demand trace CSV (interval_index,demand)");
  app.add_option("--synthetic", o.synthetic, "Generate the trace from a distribution, e.g. 9:0.9,15:0.1");
  app.add_option("--intervals", o.synthetic_intervals, "Length of a synthetic trace");
  app.add_option("--seed", o.seed, "Seed for every random draw");
  app.add_option("--interval-seconds", o.interval_seconds, "Length of one short-term interval");
  app.add_option("--launch-latency", o.launch_latency, "Intervals before a requested VM serves");
  app.add_option("--min-rental", o.min_rental, "Intervals a VM must run before shutdown (default: billing quantum)");
  app.add_option("--kf-q", o.kf_q, "Kalman process-noise variance");
  app.add_option("--kf-r", o.kf_r, "Kalman measurement-noise variance");
  app.add_option("--headroom", o.headroom, "Multiplier applied to the forecast (>= 1)");
  app.add_option("--out", o.out_dir, "Directory for output artifacts");

  auto* plan = app.add_subcommand("plan-reserve", "Long-term reservation plan");
  plan->add_option("--window", o.window, "Aggregate the trace first: daily|weekly|monthly");
  plan->add_option("--reducer", o.reducer, "Aggregation reducer: max|mean|p95");

  auto* simulate = app.add_subcommand("simulate", "Replay the trace under one policy");
  simulate->add_option("--policy", o.policy, "One of " + policy_names());

  auto* compare = app.add_subcommand("compare", "Replay the trace under several policies");
  compare->add_option("--policies", o.policies, "Comma-separated policy names")->required();
  compare->add_option("--format", o.format, "table|csv");

  auto* analyze = app.add_subcommand("analyze", "Trace statistics and empirical distribution");
  analyze->add_option("--window", o.window, "Aggregate the trace first: daily|weekly|monthly");
  analyze->add_option("--reducer", o.reducer, "Aggregation reducer: max|mean|p95");

  // CLI11 takes the arguments without argv[0], in reverse order.
  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*plan) return cmd_plan_reserve(o, out, err);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*compare) return cmd_compare(o, out, err);
    if (*analyze) return cmd_analyze(o, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {  // includes ValidationError
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace cloudplan
