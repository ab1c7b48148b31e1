#pragma once

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnet::cli {

/// Bad scenario input; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that parses back to the same double (".inf" style for infinities).
std::string format_number(double v);

/// One mapping in the scenario file. Every accessor records the resolved value
/// (given or default) so the effective configuration can be written back out,
/// and marks the key as known; check_unknown() then rejects everything else.
class Section {
 public:
  /// `node` may be undefined or null, meaning an empty mapping.
  Section(YAML::Node node, std::string path, std::string source);

  const std::string& path() const;
  bool has(const std::string& key) const;

  double number(const std::string& key, double fallback);
  double number(const std::string& key);  // required
  std::optional<double> optional_number(const std::string& key);
  std::uint64_t count(const std::string& key, std::uint64_t fallback);
  std::uint64_t count(const std::string& key);
  std::optional<std::uint64_t> optional_count(const std::string& key);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::string text(const std::string& key);
  std::optional<std::string> optional_text(const std::string& key);
  std::vector<double> numbers(const std::string& key);
  std::vector<std::uint64_t> counts(const std::string& key);

  /// Text parsed by `parse`; library errors become diagnostics on this key.
  template <class T>
  T choice(const std::string& key, const std::string& fallback, const std::function<T(const std::string&)>& parse) {
    const std::string raw = text(key, fallback);
    try {
      return parse(raw);
    } catch (const std::exception& e) {
      error(key, e.what());
    }
  }

  Section child(const std::string& key);
  /// Sequence of mappings. Scalar items are allowed only when `scalar_key`
  /// is given; they are read as {scalar_key: item}.
  std::vector<Section> list(const std::string& key, const std::string& scalar_key = "");

  [[noreturn]] void error(const std::string& key, const std::string& message) const;
  /// Diagnostic for the section as a whole.
  [[noreturn]] void error_here(const std::string& message) const;

  void check_unknown() const;
  YAML::Node effective() const;

 private:
  struct State;
  explicit Section(std::shared_ptr<State> s);
  YAML::Node get(const std::string& key) const;
  std::string scalar(const std::string& key, const YAML::Node& n) const;
  void record(const std::string& key, YAML::Node value);
  std::shared_ptr<State> s_;
};

/// Parses text as YAML; syntax errors become ConfigError with the line.
YAML::Node load_yaml(const std::string& text, const std::string& source);
YAML::Node load_yaml_file(const std::string& path);

/// Sets root[a][b]... = value for a dotted path; value is parsed as YAML.
void apply_override(YAML::Node& root, const std::string& dotted_path, const std::string& value);

std::string emit_yaml(const YAML::Node& node);

}  // namespace qnet::cli
