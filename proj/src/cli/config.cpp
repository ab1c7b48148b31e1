#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>
#include <variant>

namespace qnet::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return ".nan";
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::optional<double> parse_double(const std::string& s) {
  if (s == ".inf" || s == ".Inf" || s == "+.inf" || s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-.inf" || s == "-.Inf" || s == "-inf") return -std::numeric_limits<double>::infinity();
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  double v = 0.0;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_count(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
  // Accept integral values written as 1e5.
  const auto d = parse_double(s);
  if (d && std::isfinite(*d) && *d >= 0.0 && *d < 1.8e19 && std::floor(*d) == *d) return static_cast<std::uint64_t>(*d);
  return std::nullopt;
}

std::string location(const YAML::Node& n, const std::string& source) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return "command line";
  return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

}  // namespace

struct Section::State {
  YAML::Node node;
  std::string path;
  std::string source;
  std::set<std::string> used;
  using Entry = std::variant<YAML::Node, std::shared_ptr<State>, std::vector<std::shared_ptr<State>>>;
  std::vector<std::pair<std::string, Entry>> entries;
};

Section::Section(YAML::Node node, std::string path, std::string source) : s_(std::make_shared<State>()) {
  s_->path = std::move(path);
  s_->source = std::move(source);
  if (node && !node.IsNull() && !node.IsMap())
    throw ConfigError(location(node, s_->source) + ": " + (s_->path.empty() ? "configuration" : s_->path) +
                      ": expected a mapping");
  s_->node = node && node.IsMap() ? node : YAML::Node(YAML::NodeType::Map);
}

Section::Section(std::shared_ptr<State> s) : s_(std::move(s)) {}

const std::string& Section::path() const { return s_->path; }

bool Section::has(const std::string& key) const {
  const YAML::Node n = std::as_const(s_->node)[key];
  return n && !n.IsNull();
}

YAML::Node Section::get(const std::string& key) const {
  s_->used.insert(key);
  return std::as_const(s_->node)[key];
}

void Section::error(const std::string& key, const std::string& message) const {
  const std::string field = s_->path.empty() ? key : s_->path + "." + key;
  const YAML::Node n = std::as_const(s_->node)[key];
  const std::string where = n ? location(n, s_->source) : location(s_->node, s_->source);
  throw ConfigError(where + ": " + field + ": " + message);
}

void Section::error_here(const std::string& message) const {
  throw ConfigError(location(s_->node, s_->source) + ": " + (s_->path.empty() ? "configuration" : s_->path) + ": " +
                    message);
}

std::string Section::scalar(const std::string& key, const YAML::Node& n) const {
  if (!n.IsScalar()) error(key, "expected a scalar value");
  return n.Scalar();
}

void Section::record(const std::string& key, YAML::Node value) {
  for (auto it = s_->entries.begin(); it != s_->entries.end(); ++it)
    if (it->first == key) {
      s_->entries.erase(it);
      break;
    }
  s_->entries.emplace_back(key, value);
}

double Section::number(const std::string& key, double fallback) {
  auto v = optional_number(key);
  if (!v) {
    v = fallback;
    record(key, YAML::Node(format_number(fallback)));
  }
  return *v;
}

double Section::number(const std::string& key) {
  auto v = optional_number(key);
  if (!v) error(key, "required number is missing");
  return *v;
}

std::optional<double> Section::optional_number(const std::string& key) {
  const YAML::Node n = get(key);
  if (!n || n.IsNull()) return std::nullopt;
  const auto v = parse_double(scalar(key, n));
  if (!v) error(key, "expected a number, got '" + n.Scalar() + "'");
  record(key, YAML::Node(format_number(*v)));
  return v;
}

std::uint64_t Section::count(const std::string& key, std::uint64_t fallback) {
  auto v = optional_count(key);
  if (!v) {
    v = fallback;
    record(key, YAML::Node(std::to_string(fallback)));
  }
  return *v;
}

std::uint64_t Section::count(const std::string& key) {
  auto v = optional_count(key);
  if (!v) error(key, "required count is missing");
  return *v;
}

std::optional<std::uint64_t> Section::optional_count(const std::string& key) {
  const YAML::Node n = get(key);
  if (!n || n.IsNull()) return std::nullopt;
  const auto v = parse_count(scalar(key, n));
  if (!v) error(key, "expected a non-negative integer, got '" + n.Scalar() + "'");
  record(key, YAML::Node(std::to_string(*v)));
  return v;
}

bool Section::flag(const std::string& key, bool fallback) {
  const YAML::Node n = get(key);
  bool v = fallback;
  if (n && !n.IsNull()) {
    const std::string s = scalar(key, n);
    if (s == "true" || s == "True" || s == "yes" || s == "1") v = true;
    else if (s == "false" || s == "False" || s == "no" || s == "0") v = false;
    else error(key, "expected true or false, got '" + s + "'");
  }
  record(key, YAML::Node(v ? "true" : "false"));
  return v;
}

std::string Section::text(const std::string& key, const std::string& fallback) {
  auto v = optional_text(key);
  if (!v) {
    v = fallback;
    record(key, YAML::Node(fallback));
  }
  return *v;
}

std::string Section::text(const std::string& key) {
  auto v = optional_text(key);
  if (!v) error(key, "required value is missing");
  return *v;
}

std::optional<std::string> Section::optional_text(const std::string& key) {
  const YAML::Node n = get(key);
  if (!n || n.IsNull()) return std::nullopt;
  std::string v = scalar(key, n);
  record(key, YAML::Node(v));
  return v;
}

std::vector<double> Section::numbers(const std::string& key) {
  const YAML::Node n = get(key);
  std::vector<double> out;
  if (!n || n.IsNull()) return out;
  if (!n.IsSequence()) error(key, "expected a list of numbers");
  YAML::Node eff(YAML::NodeType::Sequence);
  for (const auto& item : n) {
    const auto v = item.IsScalar() ? parse_double(item.Scalar()) : std::nullopt;
    if (!v) error(key, "expected a list of numbers");
    out.push_back(*v);
    eff.push_back(format_number(*v));
  }
  eff.SetStyle(YAML::EmitterStyle::Flow);
  record(key, eff);
  return out;
}

std::vector<std::uint64_t> Section::counts(const std::string& key) {
  const YAML::Node n = get(key);
  std::vector<std::uint64_t> out;
  if (!n || n.IsNull()) return out;
  if (!n.IsSequence()) error(key, "expected a list of integers");
  YAML::Node eff(YAML::NodeType::Sequence);
  for (const auto& item : n) {
    const auto v = item.IsScalar() ? parse_count(item.Scalar()) : std::nullopt;
    if (!v) error(key, "expected a list of non-negative integers");
    out.push_back(*v);
    eff.push_back(std::to_string(*v));
  }
  eff.SetStyle(YAML::EmitterStyle::Flow);
  record(key, eff);
  return out;
}

Section Section::child(const std::string& key) {
  const YAML::Node n = get(key);
  if (n && !n.IsNull() && !n.IsMap()) error(key, "expected a mapping");
  Section c(n, s_->path.empty() ? key : s_->path + "." + key, s_->source);
  s_->entries.emplace_back(key, c.s_);
  return c;
}

std::vector<Section> Section::list(const std::string& key, const std::string& scalar_key) {
  const YAML::Node n = get(key);
  std::vector<Section> out;
  std::vector<std::shared_ptr<State>> states;
  if (n && !n.IsNull()) {
    if (!n.IsSequence()) error(key, "expected a list");
    const std::string base = s_->path.empty() ? key : s_->path + "." + key;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const YAML::Node item = n[i];
      const std::string p = base + "[" + std::to_string(i) + "]";
      YAML::Node wrapped(YAML::NodeType::Map);
      if (item.IsScalar() && !scalar_key.empty()) wrapped[scalar_key] = item;
      else if (!item.IsMap()) throw ConfigError(location(item, s_->source) + ": " + p + ": expected a mapping");
      Section c(item.IsMap() ? item : wrapped, p, s_->source);
      states.push_back(c.s_);
      out.push_back(c);
    }
  }
  s_->entries.emplace_back(key, states);
  return out;
}

void Section::check_unknown() const {
  for (const auto& kv : s_->node) {
    const std::string key = kv.first.as<std::string>();
    if (!s_->used.count(key)) {
      const std::string field = s_->path.empty() ? key : s_->path + "." + key;
      throw ConfigError(location(kv.first, s_->source) + ": " + field + ": unknown key");
    }
  }
  for (const auto& [k, v] : s_->entries) {
    if (const auto* c = std::get_if<std::shared_ptr<State>>(&v)) Section(*c).check_unknown();
    if (const auto* cs = std::get_if<std::vector<std::shared_ptr<State>>>(&v))
      for (const auto& c : *cs) Section(c).check_unknown();
  }
}

YAML::Node Section::effective() const {
  YAML::Node out(YAML::NodeType::Map);
  for (const auto& [k, v] : s_->entries) {
    if (const auto* n = std::get_if<YAML::Node>(&v)) out[k] = *n;
    if (const auto* c = std::get_if<std::shared_ptr<State>>(&v)) {
      YAML::Node e = Section(*c).effective();
      if (e.size() > 0) out[k] = e;
    }
    if (const auto* cs = std::get_if<std::vector<std::shared_ptr<State>>>(&v)) {
      if (cs->empty()) continue;
      YAML::Node seq(YAML::NodeType::Sequence);
      for (const auto& c : *cs) seq.push_back(Section(c).effective());
      out[k] = seq;
    }
  }
  return out;
}

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    YAML::Node n = YAML::Load(text);
    if (!n || n.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!n.IsMap()) throw ConfigError(source + ":1:1: top level must be a mapping");
    return n;
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
}

YAML::Node load_yaml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_yaml(ss.str(), path);
}

namespace {

// Recursion instead of rebinding handles: yaml-cpp's Node::operator= writes
// through to the referenced node.
void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value,
              const std::string& dotted) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  const YAML::Node next = node[parts[i]];
  if (!next || next.IsNull()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
  else if (!next.IsMap()) throw ConfigError("command line: " + dotted + ": '" + parts[i] + "' is not a mapping");
  set_path(node[parts[i]], parts, i + 1, value, dotted);
}

}  // namespace

void apply_override(YAML::Node& root, const std::string& dotted_path, const std::string& value) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : dotted_path) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  for (const auto& p : parts)
    if (p.empty()) throw ConfigError("command line: bad key path '" + dotted_path + "'");

  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("command line: " + dotted_path + ": " + e.msg);
  }
  // Scalars are rebuilt without a source mark so diagnostics name the command line.
  set_path(root, parts, 0, !parsed || parsed.IsScalar() ? YAML::Node(value) : parsed, dotted_path);
}

std::string emit_yaml(const YAML::Node& node) {
  YAML::Emitter e;
  e << node;
  return std::string(e.c_str()) + "\n";
}

}  // namespace qnet::cli
