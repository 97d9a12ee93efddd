#include "weaklab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weaklab {

int Table::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

bool needs_quotes(const std::string& f) {
  return f.find_first_of(",\"\n\r") != std::string::npos;
}

void encode_field(const std::string& f, std::string& out) {
  if (!needs_quotes(f)) {
    out += f;
    return;
  }
  out += '"';
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void encode_row(const std::vector<std::string>& row, std::string& out) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    encode_field(row[i], out);
  }
  out += '\n';
}

}  // namespace

std::string csv_encode(const Table& table) {
  std::string out;
  encode_row(table.header, out);
  for (const auto& row : table.rows) encode_row(row, out);
  return out;
}

Table csv_decode(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  size_t i = 0;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&]() {
    end_field();
    records.push_back(row);
    row.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (records.empty()) throw std::runtime_error("csv: missing header row");

  Table t;
  t.header = records.front();
  t.rows.assign(records.begin() + 1, records.end());
  for (size_t r = 0; r < t.rows.size(); ++r)
    if (t.rows[r].size() != t.header.size())
      throw std::runtime_error("csv: row " + std::to_string(r + 1) + " has " + std::to_string(t.rows[r].size()) +
                               " fields, header has " + std::to_string(t.header.size()));
  return t;
}

void write_csv(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << csv_encode(table);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open csv: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return csv_decode(buf.str());
}

std::string format_double(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

}  // namespace weaklab
