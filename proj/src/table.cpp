// SPDX-License-Identifier: Apache-2.0
#include "fdcell/table.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace fdcell {

std::string format_full_precision(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string ExperimentTable::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw std::logic_error("ExperimentTable: row width does not match schema");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_full_precision(row[c]);
    }
    out += '\n';
  }
  return out;
}

double ExperimentTable::at(std::size_t row, const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) {
    throw std::out_of_range("ExperimentTable: no column named " + column);
  }
  return rows.at(row).at(static_cast<std::size_t>(it - columns.begin()));
}

}  // namespace fdcell
