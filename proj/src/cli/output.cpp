#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "config.hpp"

namespace qnet::cli {

Format parse_format(const std::string& text) {
  if (text == "jsonl") return Format::Jsonl;
  if (text == "csv") return Format::Csv;
  if (text == "table") return Format::Table;
  throw ConfigError("unknown output format '" + text + "' (expected jsonl, csv or table)");
}

std::string to_string(Format f) {
  switch (f) {
    case Format::Jsonl: return "jsonl";
    case Format::Csv: return "csv";
    case Format::Table: return "table";
  }
  return "jsonl";
}

std::string cell_text(const Record& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

namespace {

std::vector<std::string> keys_of(const Record& r) {
  std::vector<std::string> k;
  for (const auto& [key, _] : r.items()) k.push_back(key);
  return k;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Six significant digits for humans; everything else verbatim.
std::string table_cell(const Record& v) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) return format_number(d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", d);
    return buf;
  }
  return cell_text(v);
}

// Display width in code points; continuation bytes do not count.
std::size_t text_width(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

// Consecutive records with the same keys form one block with one header.
template <class Cell>
void write_blocks(std::ostream& out, const std::vector<Record>& records, const std::string& sep, Cell cell,
                  bool pad) {
  std::size_t i = 0;
  bool first = true;
  while (i < records.size()) {
    const auto keys = keys_of(records[i]);
    std::size_t j = i;
    while (j < records.size() && keys_of(records[j]) == keys) ++j;
    std::vector<std::vector<std::string>> rows{keys};
    for (std::size_t r = i; r < j; ++r) {
      std::vector<std::string> row;
      for (const auto& k : keys) row.push_back(cell(records[r][k]));
      rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(keys.size(), 0);
    if (pad)
      for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], text_width(row[c]));
    if (!first) out << '\n';
    first = false;
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << sep;
        out << row[c];
        if (pad && c + 1 < row.size()) out << std::string(width[c] - text_width(row[c]), ' ');
      }
      out << '\n';
    }
    i = j;
  }
}

}  // namespace

void Sink::write(std::ostream& out, Format f) const {
  switch (f) {
    case Format::Jsonl:
      for (const auto& r : records_) out << r.dump() << '\n';
      break;
    case Format::Csv:
      write_blocks(out, records_, ",", [](const Record& v) { return csv_escape(cell_text(v)); }, false);
      break;
    case Format::Table:
      write_blocks(out, records_, " | ", table_cell, true);
      break;
  }
}

}  // namespace qnet::cli
