// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace v2g {

/// Invalid configuration; field() names the offending key (dotted path).
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string &what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string &field() const { return field_; }

private:
  std::string field_;
};

/// A data file could not be read or failed validation.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ReplayError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation is invoked on a finished or inconsistent simulation.
class SimulationError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A controller was asked to act on information it cannot see.
class CapabilityError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace v2g
