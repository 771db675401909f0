#pragma once

#include <stdexcept>
#include <string>

namespace repbandit {

/// Invalid arguments to an operation (bad dimensions, out-of-range values).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Parameter combinations outside the regime an algorithm supports
/// (e.g. a replicability budget too small for the horizon).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (factorization breakdown, residual out of bounds).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace repbandit
