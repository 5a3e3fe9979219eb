// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string_view>
#include <vector>

namespace cloudplan {

// Measured demand per short-term interval, in abstract demand units
// (concurrent users or request rate). VM capacities use the same unit.
struct DemandTrace {
  double interval_seconds = 300.0;
  std::vector<std::int64_t> samples;
};

DemandTrace parse_trace(std::istream& in, double interval_seconds = 300.0);
// CSV with columns `interval_index,demand`; the header row is optional.
// Rows are ordered by interval_index. Throws IoError, ParseError, or
// ValidationError (negative demand, empty file).
DemandTrace load_trace(const std::filesystem::path& path, double interval_seconds = 300.0);

// Each sample d becomes ceil(d / capacity): the instance count of one type
// needed to serve it.
DemandTrace to_vm_units(const DemandTrace& trace, std::int64_t capacity);

// Discrete demand distribution with exact integer weights. Probabilities are
// weight / total_weight. An empirical histogram uses sample counts as weights.
class DemandDistribution {
 public:
  DemandDistribution() = default;

  // support strictly ascending, nonnegative; weights positive.
  static DemandDistribution from_weights(std::vector<std::int64_t> support, std::vector<std::uint64_t> weights);
  // Probabilities are quantized to multiples of 1e-9 and must sum to 1 within 1e-9.
  static DemandDistribution from_probabilities(std::vector<std::int64_t> support, std::span<const double> probs);

  std::span<const std::int64_t> support() const { return support_; }
  std::span<const std::uint64_t> weights() const { return weights_; }
  std::uint64_t total_weight() const { return total_; }
  std::size_t size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }

  double probability(std::size_t i) const;
  std::int64_t max_value() const { return support_.back(); }
  double mean() const;

  // Total weight strictly above r.
  std::uint64_t weight_above(std::int64_t r) const;

  // Same distribution with every support value d mapped to ceil(d / capacity);
  // coinciding values are merged.
  DemandDistribution to_vm_units(std::int64_t capacity) const;

 private:
  std::vector<std::int64_t> support_;
  std::vector<std::uint64_t> weights_;
  std::uint64_t total_ = 0;
};

// Empirical histogram of the samples. Throws std::invalid_argument if empty.
DemandDistribution build_distribution(const DemandTrace& trace);

// P(D >= r + 1).
double ccdf(const DemandDistribution& dist, std::int64_t r);

enum class Window { daily, weekly, monthly };
enum class Reducer { max, mean, p95 };

Window parse_window(std::string_view name);
Reducer parse_reducer(std::string_view name);
std::int64_t window_seconds(Window w);

// One sample per consecutive block of `window_intervals` samples (a trailing
// partial block is reduced as is). Mean rounds up; p95 is nearest-rank.
DemandTrace aggregate(const DemandTrace& trace, std::size_t window_intervals, Reducer reducer);
// Calendar window; throws std::invalid_argument if the window is shorter than
// one interval.
DemandTrace aggregate(const DemandTrace& trace, Window window, Reducer reducer);

// `n` i.i.d. draws from `dist` using a 64-bit Mersenne twister seeded with
// `seed`. Inverse-CDF sampling on exact weights, so the stream is identical
// on every platform.
std::vector<std::int64_t> sample_demand(const DemandDistribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace cloudplan
