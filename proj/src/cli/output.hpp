#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qnet::cli {

inline constexpr std::string_view kSchemaVersion = "qnet-output/1";

using Record = nlohmann::ordered_json;

enum class Format { Jsonl, Csv, Table };
Format parse_format(const std::string& text);
std::string to_string(Format f);

/// Collects records in order; nothing is written until the command succeeds.
class Sink {
 public:
  void add(Record r) { records_.push_back(std::move(r)); }
  const std::vector<Record>& records() const { return records_; }
  void write(std::ostream& out, Format f) const;

 private:
  std::vector<Record> records_;
};

/// Text form of one value as it appears in CSV and table cells.
std::string cell_text(const Record& value);

}  // namespace qnet::cli
