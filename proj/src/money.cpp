// SPDX-License-Identifier: Apache-2.0
#include "cloudplan/money.hpp"

#include <cstdio>
#include <cstdlib>

namespace cloudplan {

std::string Money::to_string() const {
  const std::int64_t whole = micros_ / kMicrosPerUnit;
  const std::int64_t frac = std::llabs(micros_ % kMicrosPerUnit);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", (micros_ < 0 && whole == 0) ? "-" : "",
                static_cast<long long>(whole), static_cast<long long>(frac));
  return buf;
}

}  // namespace cloudplan
