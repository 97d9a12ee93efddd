#pragma once

#include <string>
#include <vector>

namespace weaklab {

// String table with a header row, written and parsed RFC-4180 style
// (quotes doubled, fields quoted when they contain commas, quotes or
// newlines).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

std::string csv_encode(const Table& table);
Table csv_decode(const std::string& text);
void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace weaklab
