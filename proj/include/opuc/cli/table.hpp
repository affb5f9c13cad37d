#pragma once

#include <string>
#include <variant>
#include <vector>

#include "opuc/coeffs.hpp"

namespace opuc::cli {

using Cell = std::variant<long long, double, Complex, std::string>;

struct Column {
  std::string name;
  bool complex = false;  // expands to re_<name>, im_<name>
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class TableFormat { csv, json };

/// CSV with a header row, or a JSON array of records. Doubles are printed
/// with 17 significant digits. Throws std::invalid_argument on a row whose
/// length or cell kinds do not match the columns.
std::string emit_table(const Table& table, TableFormat format);

std::string format_double(double value);

}  // namespace opuc::cli
