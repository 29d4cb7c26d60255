#pragma once

#include <stdexcept>
#include <string>

namespace qsq {

/// Invalid input or configuration: a caller-side contract violation.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine could not produce a result satisfying its contract.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsq
