#pragma once

#include <stdexcept>
#include <string>

namespace ritzpen {

/// Bad user-facing configuration: unknown domain kinds, malformed
/// architecture strings, invalid sweep grids, missing config files.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An API contract was violated by the caller (e.g. asking for the
/// penalty form of a problem assembled in natural mode).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Numerical failure: non-finite values, failed factorizations,
/// diverged optimization runs.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

inline void require_config(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace ritzpen
