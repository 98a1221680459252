// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fdcell {

/// Invalid or inconsistent run configuration (bad parameter ranges,
/// malformed config files).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver hit its iteration cap before reaching its tolerance.
/// Carries the value of the last feasible iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_value)
      : std::runtime_error(what), last_value_(last_value) {}

  double last_value() const noexcept { return last_value_; }

 private:
  double last_value_;
};

}  // namespace fdcell
