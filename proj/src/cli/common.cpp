#include <limits>

#include "commands.hpp"
#include "qnet/error.hpp"

namespace qnet::cli {

channels::NoiseChannel parse_channel(Section& s) {
  const std::string type = s.text("type");
  channels::NoiseChannel ch;
  if (type == "bit_flip") ch = channels::BitFlip{s.number("p")};
  else if (type == "phase_flip") ch = channels::PhaseFlip{s.number("p")};
  else if (type == "depolarizing") ch = channels::Depolarizing{s.number("p")};
  else if (type == "t1") ch = channels::RelaxationT1{s.number("t"), s.number("T1")};
  else if (type == "t2") ch = channels::DephasingT2{s.number("t"), s.number("T2")};
  else s.error("type", "unknown channel '" + type + "' (bit_flip, phase_flip, depolarizing, t1, t2)");
  try {
    channels::validate(ch);
  } catch (const Error& e) {
    s.error_here(e.what());
  }
  return ch;
}

entangled::BellLabel parse_label(Section& s, const std::string& key, const std::string& fallback) {
  return s.choice<entangled::BellLabel>(key, fallback,
                                        [](const std::string& t) { return entangled::parse_bell_label(t); });
}

std::string bits_text(const std::vector<int>& bits) {
  std::string out;
  for (int b : bits) out += b ? '1' : '0';
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string positions_text(const std::vector<std::size_t>& zero_based) {
  std::vector<std::string> p;
  for (auto i : zero_based) p.push_back(std::to_string(i + 1));
  return join(p, " ");
}

namespace {

linklayer::MemorySpec parse_memory(Section& s, const linklayer::MemorySpec& d) {
  return {s.number("T1_s", d.T1_s), s.number("T2_s", d.T2_s)};
}

}  // namespace

linklayer::LinkSpec parse_link_spec(Section& s, const linklayer::LinkSpec& d) {
  linklayer::LinkSpec spec;
  spec.architecture = s.choice<linklayer::Architecture>(
      "architecture", std::string(linklayer::to_string(d.architecture)),
      [](const std::string& t) { return linklayer::parse_architecture(t); });
  spec.length_km = s.number("length_km", d.length_km);
  spec.alpha_db_per_km = s.number("alpha_db_per_km", d.alpha_db_per_km);
  spec.bsa_position_km = s.optional_number("bsa_position_km");
  if (!spec.bsa_position_km && d.bsa_position_km) spec.bsa_position_km = s.number("bsa_position_km", *d.bsa_position_km);
  auto left = s.child("left");
  spec.left = parse_memory(left, d.left);
  auto right = s.child("right");
  spec.right = parse_memory(right, d.right);
  spec.attempt_rate_hz = s.number("attempt_rate_hz", d.attempt_rate_hz);
  spec.detector_efficiency = s.number("detector_efficiency", d.detector_efficiency);
  spec.pair_source_rate_hz = s.number("pair_source_rate_hz", d.pair_source_rate_hz);
  spec.threshold_fidelity = s.number("threshold_fidelity", d.threshold_fidelity);
  spec.raw_fidelity = s.number("raw_fidelity", d.raw_fidelity);
  spec.dark_count_prob = s.number("dark_count_prob", d.dark_count_prob);
  spec.extra_wait_s = s.number("extra_wait_s", d.extra_wait_s);
  try {
    linklayer::validate(spec);
  } catch (const Error& e) {
    s.error_here(e.what());
  }
  return spec;
}

network::Topology parse_topology(Section& s) {
  auto defaults_section = s.child("link_defaults");
  const linklayer::LinkSpec defaults = parse_link_spec(defaults_section, linklayer::LinkSpec{});

  std::vector<network::NodeSpec> nodes;
  for (auto& n : s.list("nodes", "id")) {
    network::NodeSpec spec;
    spec.id = n.text("id");
    const auto mem = n.count("memory_count", 2);
    if (mem < 1 || mem > 1000000) n.error("memory_count", "must be between 1 and 1000000");
    spec.memory_count = static_cast<unsigned>(mem);
    spec.T1_s = n.number("T1_s", std::numeric_limits<double>::infinity());
    spec.T2_s = n.number("T2_s", std::numeric_limits<double>::infinity());
    nodes.push_back(spec);
  }
  if (nodes.empty()) s.error("nodes", "at least one node is required");

  std::vector<network::Link> links;
  for (auto& l : s.list("links")) {
    network::Link link;
    link.a = l.text("a");
    link.b = l.text("b");
    link.cost_override = l.optional_number("cost");
    link.spec = parse_link_spec(l, defaults);
    links.push_back(std::move(link));
  }
  try {
    return network::Topology(std::move(nodes), std::move(links));
  } catch (const Error& e) {
    s.error_here(e.what());
  }
}

network::Request parse_request(Section& s) {
  network::Request r;
  r.src = s.text("src");
  r.dst = s.text("dst");
  const auto pairs = s.count("pairs", 1);
  if (pairs < 1 || pairs > 1000000) s.error("pairs", "must be between 1 and 1000000");
  r.pairs_wanted = static_cast<unsigned>(pairs);
  r.f_min = s.number("f_min", 0.0);
  if (r.f_min < 0.0 || r.f_min >= 1.0) s.error("f_min", "must be in [0, 1)");
  return r;
}

}  // namespace qnet::cli
