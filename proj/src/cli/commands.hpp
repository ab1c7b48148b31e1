#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"
#include "qnet/channels.hpp"
#include "qnet/entangled.hpp"
#include "qnet/linklayer.hpp"
#include "qnet/network.hpp"
#include "qnet/rng.hpp"

namespace qnet::cli {

struct Context {
  std::uint64_t seed;
  RngStream rng;
  Sink& sink;
};

using Runner = std::function<void(Context&)>;

/// A command-line flag that sets one key of the command's section.
struct Shortcut {
  std::string flag;  // without leading dashes
  std::string key;
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  bool randomized;
  Format default_format;
  std::vector<Shortcut> shortcuts;
  std::string positional_key;  // key filled by a positional argument, if any
  std::function<Runner(Section&)> parse;
};

const std::vector<Command>& commands();

// Parsers shared between commands.
channels::NoiseChannel parse_channel(Section& s);
linklayer::LinkSpec parse_link_spec(Section& s, const linklayer::LinkSpec& defaults);
network::Topology parse_topology(Section& s);
network::Request parse_request(Section& s);
entangled::BellLabel parse_label(Section& s, const std::string& key, const std::string& fallback);

std::string bits_text(const std::vector<int>& bits);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string positions_text(const std::vector<std::size_t>& zero_based);

// Command factories, one per subcommand.
Runner parse_state(Section& s);
Runner parse_chsh(Section& s);
Runner parse_teleport(Section& s);
Runner parse_bb84(Section& s);
Runner parse_e91(Section& s);
Runner parse_swap(Section& s);
Runner parse_purify(Section& s);
Runner parse_link(Section& s);
Runner parse_route(Section& s);
Runner parse_net(Section& s);
Runner parse_optics(Section& s);
Runner parse_reproduce(Section& s);

}  // namespace qnet::cli
