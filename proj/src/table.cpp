#include "atomtf/table.hpp"
#include "atomtf/errors.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace atomtf {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw parameter_error("Table::add_row: row width does not match schema");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void emit_table(const Table& t, TableFormat f, std::ostream& os) {
  if (f == TableFormat::csv) {
    for (std::size_t j = 0; j < t.columns.size(); ++j)
      os << (j ? "," : "") << t.columns[j];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j)
        os << (j ? "," : "") << format_number(row[j]);
      os << '\n';
    }
    for (const auto& [k, v] : t.summary) os << "# " << k << " = " << format_number(v) << '\n';
    return;
  }
  // hand-rolled JSON keeps insertion order and the numeric format identical
  // to the CSV path
  os << "{\n  \"columns\": [";
  for (std::size_t j = 0; j < t.columns.size(); ++j)
    os << (j ? ", " : "") << '"' << t.columns[j] << '"';
  os << "],\n  \"rows\": [";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    os << (i ? ",\n    [" : "\n    [");
    for (std::size_t j = 0; j < t.rows[i].size(); ++j)
      os << (j ? ", " : "") << format_number(t.rows[i][j]);
    os << ']';
  }
  os << (t.rows.empty() ? "],\n" : "\n  ],\n");
  os << "  \"summary\": {";
  for (std::size_t k = 0; k < t.summary.size(); ++k)
    os << (k ? ", " : "") << '"' << t.summary[k].first
       << "\": " << format_number(t.summary[k].second);
  os << "}\n}\n";
}

void emit_table_to_file(const Table& t, TableFormat f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open output file: " + path);
  emit_table(t, f, os);
  os.flush();
  if (!os) throw config_error("failed writing output file: " + path);
}

TableFormat parse_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw config_error("unknown format: " + name + " (expected csv or json)");
}

} // namespace atomtf
