// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloudplan/money.hpp"

namespace cloudplan {

struct VmType {
  std::string id;
  std::int64_t capacity = 1;  // demand units served by one instance
};

// The three rental charges for one VM type.
struct VmPricing {
  Money upfront_total;                // per instance per lease contract
  Money reserved_usage_per_interval;  // per launched reserved instance
  Money on_demand_per_quantum;        // per started billing quantum
};

struct PriceBook {
  std::int64_t lease_period = 8760;  // short-term intervals per contract
  std::int64_t billing_quantum = 12;  // intervals per billed unit
  std::vector<VmPricing> prices;      // parallel to the catalog's type list
};

// Per-interval prices for one type, kept exact as integers over a shared
// denominator: value_per_interval = field / (denominator * 1e6).
//
// With lease period L and quantum Q the denominator is L*Q, so
//   upfront   = upfront_total_micros * Q
//   usage     = usage_micros * L * Q
//   on_demand = on_demand_per_quantum_micros * L
struct TypeRates {
  std::int64_t upfront = 0;
  std::int64_t usage = 0;
  std::int64_t on_demand = 0;
  std::int64_t denominator = 1;

  double upfront_per_interval() const;
  double usage_per_interval() const;
  // Quantum price spread evenly over its intervals. For expectation math only;
  // the simulator always bills whole quanta.
  double on_demand_per_interval() const;

  // Rates given directly as per-interval money values (denominator 1).
  static TypeRates per_interval(double upfront, double usage, double on_demand);
};

struct NormalizedPrices {
  std::int64_t lease_period = 1;
  std::int64_t billing_quantum = 1;
  std::vector<TypeRates> rates;
};

// Throws std::invalid_argument when lease_period < 1 or billing_quantum < 1.
NormalizedPrices normalize(const PriceBook& book);

// Validated, immutable list of VM types sorted by id, with their prices.
class Catalog {
 public:
  // Throws ValidationError on empty id, duplicate id, capacity < 1, negative
  // price, lease_period < billing_quantum or billing_quantum < 1.
  Catalog(std::vector<VmType> types, PriceBook book);

  std::size_t size() const { return types_.size(); }
  bool empty() const { return types_.empty(); }
  const VmType& type(std::size_t i) const { return types_.at(i); }
  const std::vector<VmType>& types() const { return types_; }
  const VmPricing& pricing(std::size_t i) const { return book_.prices.at(i); }
  const PriceBook& price_book() const { return book_; }
  const NormalizedPrices& rates() const { return rates_; }
  const TypeRates& rates(std::size_t i) const { return rates_.rates.at(i); }
  std::int64_t lease_period() const { return book_.lease_period; }
  std::int64_t billing_quantum() const { return book_.billing_quantum; }

  std::optional<std::size_t> index_of(std::string_view id) const;

  // Human-readable notes for types whose reservation can never pay off
  // (upfront + usage per interval >= on-demand per interval).
  std::vector<std::string> warnings() const;

 private:
  std::vector<VmType> types_;
  PriceBook book_;
  NormalizedPrices rates_;
};

Catalog parse_catalog(std::string_view json_text);
// IoError if the file cannot be read; ParseError / ValidationError otherwise.
Catalog load_catalog(const std::filesystem::path& path);

// Index of the type with the best capacity per upfront-per-interval price.
// Ties go to the larger capacity, then the lexicographically smaller id.
// Throws std::invalid_argument on an empty catalog.
std::size_t best_cp_type(const Catalog& catalog);

}  // namespace cloudplan
