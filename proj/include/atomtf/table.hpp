#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace atomtf {

enum class TableFormat { csv, json };

/// Rectangular numeric table with named columns and an ordered summary
/// section, emitted byte-stably: '.' decimal point, 15 significant digits,
/// '\n' line endings, stable JSON key order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;

  void add_row(std::vector<double> row);
};

/// 15-significant-digit decimal rendering used for all numeric output.
std::string format_number(double x);

void emit_table(const Table& t, TableFormat f, std::ostream& os);

/// Writes to `path`, creating or truncating; propagates stream failures.
void emit_table_to_file(const Table& t, TableFormat f, const std::string& path);

TableFormat parse_format(const std::string& name);

} // namespace atomtf
