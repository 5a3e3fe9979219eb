// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/demand.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "cloudplan/errors.hpp"

namespace cloudplan {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a / b + (a % b != 0 ? 1 : 0); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

DemandTrace parse_trace(std::istream& in, double interval_seconds) {
  std::vector<std::pair<std::int64_t, std::int64_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("trace line " + std::to_string(line_no) + ": expected `interval_index,demand`");
    }
    std::int64_t index = 0;
    std::int64_t demand = 0;
    const bool ok_index = parse_int(view.substr(0, comma), index);
    const bool ok_demand = parse_int(view.substr(comma + 1), demand);
    if (!ok_index || !ok_demand) {
      if (rows.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw ParseError("trace line " + std::to_string(line_no) + ": not an integer pair");
    }
    if (demand < 0) {
      throw ValidationError("demand", "negative value " + std::to_string(demand) + " on line " + std::to_string(line_no));
    }
    rows.emplace_back(index, demand);
  }
  if (rows.empty()) throw ValidationError("trace", "no samples");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  DemandTrace trace;
  trace.interval_seconds = interval_seconds;
  trace.samples.reserve(rows.size());
  for (const auto& [index, demand] : rows) trace.samples.push_back(demand);
  return trace;
}

DemandTrace load_trace(const std::filesystem::path& path, double interval_seconds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace '" + path.string() + "'");
  return parse_trace(in, interval_seconds);
}

DemandTrace to_vm_units(const DemandTrace& trace, std::int64_t capacity) {
  if (capacity < 1) throw std::invalid_argument("to_vm_units: capacity must be >= 1");
  DemandTrace out{trace.interval_seconds, {}};
  out.samples.reserve(trace.samples.size());
  for (auto d : trace.samples) out.samples.push_back(ceil_div(d, capacity));
  return out;
}

DemandDistribution DemandDistribution::from_weights(std::vector<std::int64_t> support,
                                                    std::vector<std::uint64_t> weights) {
  if (support.empty()) throw std::invalid_argument("distribution: empty support");
  if (support.size() != weights.size()) throw std::invalid_argument("distribution: support/weight size mismatch");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0) throw std::invalid_argument("distribution: negative support value");
    if (i > 0 && support[i] <= support[i - 1]) throw std::invalid_argument("distribution: support not strictly ascending");
    if (weights[i] == 0) throw std::invalid_argument("distribution: zero weight");
  }
  DemandDistribution d;
  d.total_ = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
  d.support_ = std::move(support);
  d.weights_ = std::move(weights);
  return d;
}

DemandDistribution DemandDistribution::from_probabilities(std::vector<std::int64_t> support,
                                                          std::span<const double> probs) {
  constexpr double kScale = 1e9;
  if (support.size() != probs.size()) throw std::invalid_argument("distribution: support/probability size mismatch");
  double sum = 0.0;
  std::vector<std::uint64_t> weights;
  weights.reserve(probs.size());
  for (double p : probs) {
    if (!(p > 0.0)) throw std::invalid_argument("distribution: probabilities must be positive");
    sum += p;
    weights.push_back(static_cast<std::uint64_t>(std::llround(p * kScale)));
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("distribution: probabilities do not sum to 1");
  return from_weights(std::move(support), std::move(weights));
}

double DemandDistribution::probability(std::size_t i) const {
  return static_cast<double>(weights_.at(i)) / static_cast<double>(total_);
}

double DemandDistribution::mean() const {
  long double acc = 0;
  for (std::size_t i = 0; i < size(); ++i) acc += static_cast<long double>(support_[i]) * weights_[i];
  return static_cast<double>(acc / total_);
}

std::uint64_t DemandDistribution::weight_above(std::int64_t r) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), r);
  std::uint64_t acc = 0;
  for (auto i = static_cast<std::size_t>(it - support_.begin()); i < size(); ++i) acc += weights_[i];
  return acc;
}

DemandDistribution DemandDistribution::to_vm_units(std::int64_t capacity) const {
  if (capacity < 1) throw std::invalid_argument("to_vm_units: capacity must be >= 1");
  std::vector<std::int64_t> support;
  std::vector<std::uint64_t> weights;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto units = ceil_div(support_[i], capacity);
    if (!support.empty() && support.back() == units) {
      weights.back() += weights_[i];
    } else {
      support.push_back(units);
      weights.push_back(weights_[i]);
    }
  }
  return from_weights(std::move(support), std::move(weights));
}

DemandDistribution build_distribution(const DemandTrace& trace) {
  if (trace.samples.empty()) throw std::invalid_argument("build_distribution: empty trace");
  std::map<std::int64_t, std::uint64_t> counts;
  for (auto d : trace.samples) {
    if (d < 0) throw std::invalid_argument("build_distribution: negative sample");
    ++counts[d];
  }
  std::vector<std::int64_t> support;
  std::vector<std::uint64_t> weights;
  for (const auto& [value, count] : counts) {
    support.push_back(value);
    weights.push_back(count);
  }
  return DemandDistribution::from_weights(std::move(support), std::move(weights));
}

double ccdf(const DemandDistribution& dist, std::int64_t r) {
  return static_cast<double>(dist.weight_above(r)) / static_cast<double>(dist.total_weight());
}

Window parse_window(std::string_view name) {
  if (name == "daily") return Window::daily;
  if (name == "weekly") return Window::weekly;
  if (name == "monthly") return Window::monthly;
  throw std::invalid_argument("unknown window '" + std::string(name) + "' (daily|weekly|monthly)");
}

Reducer parse_reducer(std::string_view name) {
  if (name == "max") return Reducer::max;
  if (name == "mean") return Reducer::mean;
  if (name == "p95") return Reducer::p95;
  throw std::invalid_argument("unknown reducer '" + std::string(name) + "' (max|mean|p95)");
}

std::int64_t window_seconds(Window w) {
  switch (w) {
    case Window::daily: return 86'400;
    case Window::weekly: return 7 * 86'400;
    case Window::monthly: return 30 * 86'400;
  }
  return 0;
}

DemandTrace aggregate(const DemandTrace& trace, std::size_t window_intervals, Reducer reducer) {
  if (window_intervals < 1) throw std::invalid_argument("aggregate: window shorter than one interval");
  DemandTrace out{trace.interval_seconds * static_cast<double>(window_intervals), {}};
  std::vector<std::int64_t> block;
  for (std::size_t start = 0; start < trace.samples.size(); start += window_intervals) {
    const auto end = std::min(trace.samples.size(), start + window_intervals);
    block.assign(trace.samples.begin() + static_cast<std::ptrdiff_t>(start),
                 trace.samples.begin() + static_cast<std::ptrdiff_t>(end));
    const auto n = static_cast<std::int64_t>(block.size());
    switch (reducer) {
      case Reducer::max:
        out.samples.push_back(*std::max_element(block.begin(), block.end()));
        break;
      case Reducer::mean:
        out.samples.push_back(ceil_div(std::accumulate(block.begin(), block.end(), std::int64_t{0}), n));
        break;
      case Reducer::p95: {
        const auto rank = static_cast<std::size_t>(ceil_div(95 * n, 100));  // 1-based nearest rank
        std::nth_element(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(rank - 1), block.end());
        out.samples.push_back(block[rank - 1]);
        break;
      }
    }
  }
  return out;
}

DemandTrace aggregate(const DemandTrace& trace, Window window, Reducer reducer) {
  const double secs = static_cast<double>(window_seconds(window));
  if (!(trace.interval_seconds > 0.0) || secs < trace.interval_seconds) {
    throw std::invalid_argument("aggregate: window shorter than one interval");
  }
  return aggregate(trace, static_cast<std::size_t>(secs / trace.interval_seconds), reducer);
}

std::vector<std::int64_t> sample_demand(const DemandDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (dist.empty()) throw std::invalid_argument("sample_demand: empty distribution");
  std::mt19937_64 rng(seed);
  const std::uint64_t total = dist.total_weight();
  // Rejection keeps the draw uniform on [0, total).
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % total + 1) % total;

  std::vector<std::uint64_t> cumulative(dist.size());
  std::partial_sum(dist.weights().begin(), dist.weights().end(), cumulative.begin());

  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t x = rng();
    while (x > limit) x = rng();
    const std::uint64_t u = x % total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    out.push_back(dist.support()[static_cast<std::size_t>(it - cumulative.begin())]);
  }
  return out;
}

}  // namespace cloudplan
