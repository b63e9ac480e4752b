#pragma once

// Column-named result tables with a fixed, locale-independent CSV rendering.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace tdefl::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table() = default;
  Table(std::string n, std::vector<std::string> cols) : name(std::move(n)), columns(std::move(cols)) {}

  void add(std::vector<Cell> row);
  std::size_t column_index(const std::string& col) const;
  /// Numeric view of a column; strings become NaN.
  std::vector<double> numeric(const std::string& col) const;
};

/// Doubles use %.10g; NaN is written as "nan".
std::string format_cell(const Cell& c);
void write_csv(std::ostream& os, const Table& t);
std::string to_csv(const Table& t);

}  // namespace tdefl::cli
