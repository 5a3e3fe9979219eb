// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace cloudplan {

// Fixed-point money in integer micro-units. Sums are exact and associative,
// so cost reports do not depend on accumulation order.
class Money {
 public:
  static constexpr std::int64_t kMicrosPerUnit = 1'000'000;

  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }
  // Rounds to the nearest micro-unit.
  static Money from_units(double units) {
    return Money(static_cast<std::int64_t>(std::llround(units * static_cast<double>(kMicrosPerUnit))));
  }

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double units() const { return static_cast<double>(micros_) / static_cast<double>(kMicrosPerUnit); }

  constexpr Money& operator+=(Money other) {
    micros_ += other.micros_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    micros_ -= other.micros_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.micros_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return Money(a.micros_ * k); }
  friend constexpr auto operator<=>(Money, Money) = default;

  // Exact decimal rendering, e.g. "12.500000".
  std::string to_string() const;

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

}  // namespace cloudplan
