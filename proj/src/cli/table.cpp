#include "opuc/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace opuc::cli {

namespace {

std::vector<std::string> header(const Table& table) {
  std::vector<std::string> names;
  for (const auto& column : table.columns) {
    if (column.complex) {
      names.push_back("re_" + column.name);
      names.push_back("im_" + column.name);
    } else {
      names.push_back(column.name);
    }
  }
  return names;
}

std::string json_string(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buffer[8];
      std::snprintf(buffer, sizeof buffer, "\\u%04x", c);
      out += buffer;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string csv_string(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string json_number(double value) {
  // JSON has no representation for non-finite numbers.
  return std::isfinite(value) ? format_double(value) : "null";
}

// Flattened field values of one row, in header order.
std::vector<std::string> render(const Table& table, const std::vector<Cell>& row,
                                bool json) {
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto& cell = row[i];
    const bool complex_column = table.columns[i].complex;
    if (complex_column != std::holds_alternative<Complex>(cell))
      throw std::invalid_argument("emit_table: cell kind does not match column '" +
                                  table.columns[i].name + "'");
    if (const auto* z = std::get_if<Complex>(&cell)) {
      fields.push_back(json ? json_number(z->real()) : format_double(z->real()));
      fields.push_back(json ? json_number(z->imag()) : format_double(z->imag()));
    } else if (const auto* x = std::get_if<double>(&cell)) {
      fields.push_back(json ? json_number(*x) : format_double(*x));
    } else if (const auto* k = std::get_if<long long>(&cell)) {
      fields.push_back(std::to_string(*k));
    } else {
      const auto& text = std::get<std::string>(cell);
      fields.push_back(json ? json_string(text) : csv_string(text));
    }
  }
  return fields;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("Table::add_row: expected " + std::to_string(columns.size()) +
                                " cells, got " + std::to_string(row.size()));
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string emit_table(const Table& table, TableFormat format) {
  const auto names = header(table);
  std::ostringstream os;
  if (format == TableFormat::csv) {
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << csv_string(names[i]);
    os << '\n';
    for (const auto& row : table.rows) {
      if (row.size() != table.columns.size())
        throw std::invalid_argument("emit_table: ragged row");
      const auto fields = render(table, row, false);
      for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i];
      os << '\n';
    }
    return os.str();
  }

  os << '[';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.columns.size()) throw std::invalid_argument("emit_table: ragged row");
    const auto fields = render(table, row, true);
    os << (r ? ",\n " : "\n ") << '{';
    for (std::size_t i = 0; i < fields.size(); ++i)
      os << (i ? ", " : "") << json_string(names[i]) << ": " << fields[i];
    os << '}';
  }
  os << (table.rows.empty() ? "]\n" : "\n]\n");
  return os.str();
}

}  // namespace opuc::cli
