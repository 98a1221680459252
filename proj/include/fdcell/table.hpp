// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fdcell {

/// Formats with 17 significant digits so values round-trip exactly and CSV
/// byte-identity is meaningful.
std::string format_full_precision(double value);

/// Deterministic numeric results of one experiment: a pure function of
/// (config, master seed), independent of the worker count.
struct ExperimentTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;

  /// Comma-separated, header row first, LF line endings.
  std::string to_csv() const;

  double at(std::size_t row, const std::string& column) const;
};

}  // namespace fdcell
