#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnet/linklayer.hpp"

namespace qnet::network {

using linklayer::LinkSpec;
using state::DensityMatrix;

struct NodeSpec {
  std::string id;
  unsigned memory_count = 2;
  double T1_s = std::numeric_limits<double>::infinity();
  double T2_s = std::numeric_limits<double>::infinity();
};

struct Link {
  std::string a, b;
  LinkSpec spec;
  /// Replaces the computed link cost in routing (e.g. unit weights).
  std::optional<double> cost_override;
};

class Topology {
 public:
  Topology() = default;
  /// Throws ConfigInvalid for duplicate nodes, unknown link endpoints,
  /// self-links, repeated node pairs or memory_count < 1.
  Topology(std::vector<NodeSpec> nodes, std::vector<Link> links);

  const std::vector<NodeSpec>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  bool has_node(std::string_view id) const;
  const NodeSpec& node(std::string_view id) const;
  /// Index into links() of the link joining a and b, if any.
  std::optional<std::size_t> link_between(std::string_view a, std::string_view b) const;

  /// Adds a link (same checks as the constructor).
  void add_link(Link link);

  /// Interior nodes of a path must hold at least two memories; throws ConfigInvalid.
  void check_repeater_memories(const std::vector<std::string>& path) const;

 private:
  void check_link(const Link& link) const;
  std::vector<NodeSpec> nodes_;
  std::vector<Link> links_;
};

struct Request {
  std::string src, dst;
  unsigned pairs_wanted = 1;
  /// Threshold fidelity applied to every link on the route; 0 uses each link's own.
  double f_min = 0.0;
};

struct RouteResult {
  std::vector<std::string> path;
  double total_cost_s;
  std::vector<double> per_link_costs;
  std::vector<std::size_t> link_indices;
};

/// Routing weight of one link for a request.
double link_weight(const Link& link, const Request& req);

/// Least total link cost; ties go to the lexicographically smallest node-id
/// path. Links that cannot reach the threshold are left out. Throws
/// Unroutable when src and dst are disconnected, UnreachableThreshold when
/// they are connected only through such links, ConfigInvalid for unknown nodes.
RouteResult route(const Topology& topo, const Request& req);

struct SwapRecord {
  std::string node;
  entangled::BellLabel outcome;
  protocols::PauliFrame frame;  // accumulated frame after this swap
  double time_s;                // when the swap was performed
  double notify_s;              // when its result reaches the destination
};

struct Delivery {
  DensityMatrix pair;        // corrected, nominally PhiPlus
  double fidelity;           // to PhiPlus
  double elapsed_s;
  std::vector<SwapRecord> swap_log;
  std::vector<double> link_ready_s;  // per link, time its (purified) pair was ready
  std::uint64_t link_attempts = 0;
};

struct EndToEndResult {
  RouteResult route;
  std::vector<Delivery> deliveries;  // pairs_wanted entries
  double elapsed_s;                  // until the last delivery
};

/// Generates link pairs with the link-layer model, purifies each link to the
/// request threshold, swaps left to right and undoes the tracked Pauli frame
/// at the destination. Pairs waiting in memory decay with the node's T1/T2.
EndToEndResult end_to_end(const Topology& topo, const Request& req, RngStream& rng);

enum class Scheme { RoundRobinTD, GreedyFCFS };
std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view text);

struct LinkUsage {
  std::size_t link;
  std::string a, b;
  std::size_t users;
  std::uint64_t generated;
  std::uint64_t consumed;
};

struct RequestThroughput {
  std::size_t request;
  std::vector<std::string> path;
  std::uint64_t delivered;
  double pairs_per_s;
  bool starved;
};

struct MultiplexReport {
  std::vector<RequestThroughput> requests;
  std::vector<LinkUsage> links;     // only links used by some request
  std::size_t max_contention_link;  // index into links()
  std::size_t max_users;
  bool starvation;
  double horizon_s;
};

/// Discrete-event model: each link produces threshold-quality pairs after a
/// geometric number of attempt periods (mean equal to its link cost) and
/// holds at most one pair per request using it; a link only runs while some
/// request has a free slot on it. A request delivers when it holds a pair on
/// every link of its route. Round robin rotates fresh pairs across requests;
/// greedy FCFS hands them to the lowest-index request with a free slot.
/// A request is starved when it delivered nothing while another delivered.
MultiplexReport multiplex(const Topology& topo, const std::vector<Request>& requests, Scheme scheme,
                          double horizon_s, RngStream& rng);

}  // namespace qnet::network
