// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cloudplan {

// Input could not be read from disk.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input was read but is malformed (bad JSON, bad CSV row).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input parsed but violates a domain invariant. `field` names the offender.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace cloudplan
