// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cloudplan/errors.hpp"

namespace cloudplan {

namespace {

constexpr double kMicros = static_cast<double>(Money::kMicrosPerUnit);

double scaled(std::int64_t value, std::int64_t denominator) {
  return static_cast<double>(value) / (static_cast<double>(denominator) * kMicros);
}

}  // namespace

double TypeRates::upfront_per_interval() const { return scaled(upfront, denominator); }
double TypeRates::usage_per_interval() const { return scaled(usage, denominator); }
double TypeRates::on_demand_per_interval() const { return scaled(on_demand, denominator); }

TypeRates TypeRates::per_interval(double up, double use, double od) {
  return TypeRates{Money::from_units(up).micros(), Money::from_units(use).micros(),
                   Money::from_units(od).micros(), 1};
}

NormalizedPrices normalize(const PriceBook& book) {
  if (book.lease_period < 1) throw std::invalid_argument("lease_period must be >= 1");
  if (book.billing_quantum < 1) throw std::invalid_argument("billing_quantum must be >= 1");
  const std::int64_t lease = book.lease_period;
  const std::int64_t quantum = book.billing_quantum;

  NormalizedPrices out;
  out.lease_period = lease;
  out.billing_quantum = quantum;
  out.rates.reserve(book.prices.size());
  for (const auto& p : book.prices) {
    out.rates.push_back(TypeRates{p.upfront_total.micros() * quantum,
                                  p.reserved_usage_per_interval.micros() * lease * quantum,
                                  p.on_demand_per_quantum.micros() * lease, lease * quantum});
  }
  return out;
}

Catalog::Catalog(std::vector<VmType> types, PriceBook book) {
  if (types.size() != book.prices.size()) {
    throw ValidationError("vm_types", "price list does not match type list");
  }
  if (book.billing_quantum < 1) {
    throw ValidationError("billing_quantum_intervals", "must be >= 1");
  }
  if (book.lease_period < book.billing_quantum) {
    throw ValidationError("lease_period_intervals", "must be >= billing_quantum_intervals");
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    const auto& p = book.prices[i];
    const std::string where = "vm_types[" + std::to_string(i) + "]";
    if (t.id.empty()) throw ValidationError(where + ".id", "must be nonempty");
    if (!seen.insert(t.id).second) throw ValidationError(where + ".id", "duplicate id '" + t.id + "'");
    if (t.capacity < 1) throw ValidationError(where + ".capacity", "must be >= 1");
    if (p.upfront_total.micros() < 0) throw ValidationError(where + ".upfront_total", "must be >= 0");
    if (p.reserved_usage_per_interval.micros() < 0) {
      throw ValidationError(where + ".reserved_usage_per_interval", "must be >= 0");
    }
    if (p.on_demand_per_quantum.micros() < 0) {
      throw ValidationError(where + ".on_demand_per_quantum", "must be >= 0");
    }
  }

  std::vector<std::size_t> order(types.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return types[a].id < types[b].id; });

  types_.reserve(types.size());
  book_.lease_period = book.lease_period;
  book_.billing_quantum = book.billing_quantum;
  for (auto i : order) {
    types_.push_back(std::move(types[i]));
    book_.prices.push_back(book.prices[i]);
  }
  rates_ = normalize(book_);
}

std::optional<std::size_t> Catalog::index_of(std::string_view id) const {
  auto it = std::lower_bound(types_.begin(), types_.end(), id,
                             [](const VmType& t, std::string_view key) { return t.id < key; });
  if (it == types_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - types_.begin());
}

std::vector<std::string> Catalog::warnings() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& r = rates_.rates[i];
    if (r.upfront + r.usage >= r.on_demand) {
      out.push_back("type '" + types_[i].id +
                    "': reserved upfront+usage per interval is not below on-demand; reserving it never pays off");
    }
  }
  return out;
}

Catalog parse_catalog(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("catalog: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("catalog: top level must be an object");

  auto get_int = [](const nlohmann::json& obj, const char* key, std::int64_t fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ValidationError(where + key, "must be an integer");
    return v.get<std::int64_t>();
  };
  auto get_money = [](const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError(where + key, "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(where + key, "must be a number");
    return Money::from_units(v.get<double>());
  };

  PriceBook book;
  book.billing_quantum = get_int(doc, "billing_quantum_intervals", 12, "");
  book.lease_period = get_int(doc, "lease_period_intervals", 105120, "");

  if (!doc.contains("vm_types") || !doc.at("vm_types").is_array()) {
    throw ValidationError("vm_types", "missing or not an array");
  }
  std::vector<VmType> types;
  std::size_t i = 0;
  for (const auto& item : doc.at("vm_types")) {
    const std::string where = "vm_types[" + std::to_string(i++) + "].";
    if (!item.is_object()) throw ValidationError(where.substr(0, where.size() - 1), "must be an object");
    if (!item.contains("id") || !item.at("id").is_string()) throw ValidationError(where + "id", "must be a string");
    if (!item.contains("capacity")) throw ValidationError(where + "capacity", "missing");
    VmType t{item.at("id").get<std::string>(), get_int(item, "capacity", 0, where)};
    types.push_back(std::move(t));
    book.prices.push_back(VmPricing{get_money(item, "upfront_total", where),
                                    get_money(item, "reserved_usage_per_interval", where),
                                    get_money(item, "on_demand_per_quantum", where)});
  }
  return Catalog(std::move(types), std::move(book));
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open catalog '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str());
}

std::size_t best_cp_type(const Catalog& catalog) {
  if (catalog.empty()) throw std::invalid_argument("best_cp_type: empty catalog");
  std::size_t best = 0;
  for (std::size_t i = 1; i < catalog.size(); ++i) {
    const auto ci = static_cast<__int128>(catalog.type(i).capacity);
    const auto cb = static_cast<__int128>(catalog.type(best).capacity);
    // capacity_i / upfront_i > capacity_b / upfront_b, cross-multiplied.
    const __int128 lhs = ci * catalog.rates(best).upfront;
    const __int128 rhs = cb * catalog.rates(i).upfront;
    if (lhs > rhs || (lhs == rhs && ci > cb)) best = i;
    // Equal ratio and capacity: keep the earlier (smaller) id.
  }
  return best;
}

}  // namespace cloudplan
