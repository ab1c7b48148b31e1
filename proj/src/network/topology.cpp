#include <algorithm>
#include <cmath>
#include <set>

#include "qnet/error.hpp"
#include "qnet/network.hpp"

namespace qnet::network {

Topology::Topology(std::vector<NodeSpec> nodes, std::vector<Link> links) : nodes_(std::move(nodes)) {
  std::set<std::string> ids;
  for (const auto& n : nodes_) {
    if (n.id.empty()) fail(ErrorCode::ConfigInvalid, "node id must not be empty");
    if (!ids.insert(n.id).second) fail(ErrorCode::ConfigInvalid, "duplicate node id '" + n.id + "'");
    if (n.memory_count < 1) fail(ErrorCode::ConfigInvalid, "node '" + n.id + "': memory_count must be >= 1");
    if (!(n.T1_s > 0.0) || !(n.T2_s > 0.0)) fail(ErrorCode::ConfigInvalid, "node '" + n.id + "': T1/T2 must be > 0");
  }
  for (auto& l : links) add_link(std::move(l));
}

bool Topology::has_node(std::string_view id) const {
  return std::any_of(nodes_.begin(), nodes_.end(), [&](const NodeSpec& n) { return n.id == id; });
}

const NodeSpec& Topology::node(std::string_view id) const {
  for (const auto& n : nodes_)
    if (n.id == id) return n;
  fail(ErrorCode::ConfigInvalid, "unknown node '" + std::string(id) + "'");
}

std::optional<std::size_t> Topology::link_between(std::string_view a, std::string_view b) const {
  for (std::size_t i = 0; i < links_.size(); ++i)
    if ((links_[i].a == a && links_[i].b == b) || (links_[i].a == b && links_[i].b == a)) return i;
  return std::nullopt;
}

void Topology::check_link(const Link& l) const {
  if (!has_node(l.a) || !has_node(l.b))
    fail(ErrorCode::ConfigInvalid, "link " + l.a + "-" + l.b + " names an unknown node");
  if (l.a == l.b) fail(ErrorCode::ConfigInvalid, "link " + l.a + "-" + l.b + " joins a node to itself");
  if (link_between(l.a, l.b)) fail(ErrorCode::ConfigInvalid, "link " + l.a + "-" + l.b + " is listed twice");
  if (l.cost_override && !(*l.cost_override > 0.0))
    fail(ErrorCode::ConfigInvalid, "link " + l.a + "-" + l.b + ": cost must be > 0");
  linklayer::validate(l.spec);
}

void Topology::add_link(Link link) {
  check_link(link);
  links_.push_back(std::move(link));
}

void Topology::check_repeater_memories(const std::vector<std::string>& path) const {
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    if (node(path[i]).memory_count < 2)
      fail(ErrorCode::ConfigInvalid, "repeater '" + path[i] + "' needs at least 2 memories");
}

double link_weight(const Link& link, const Request& req) {
  if (link.cost_override) return *link.cost_override;
  std::optional<double> th;
  if (req.f_min > 0.0) th = req.f_min;
  return linklayer::link_cost(link.spec, th).seconds_per_bell_pair;
}

namespace {

bool better(double c1, const std::vector<std::string>& p1, double c2, const std::vector<std::string>& p2) {
  const double scale = std::max({1.0, std::abs(c1), std::abs(c2)});
  if (std::abs(c1 - c2) > 1e-12 * scale) return c1 < c2;
  return p1 < p2;
}

struct Label {
  bool reached = false;
  double cost = 0.0;
  std::vector<std::string> path;
  std::vector<std::size_t> links;
  std::vector<double> costs;
};

// Dijkstra over the links whose weight is in `weights` (nullopt = excluded).
std::optional<Label> shortest(const Topology& topo, const Request& req,
                              const std::vector<std::optional<double>>& weights) {
  std::map<std::string, Label> labels;
  std::set<std::string> done;
  labels[req.src] = Label{true, 0.0, {req.src}, {}, {}};
  for (;;) {
    const std::string* pick = nullptr;
    for (const auto& [id, lab] : labels) {
      if (done.count(id)) continue;
      if (!pick || better(lab.cost, lab.path, labels[*pick].cost, labels[*pick].path)) pick = &id;
    }
    if (!pick) break;
    const std::string u = *pick;
    done.insert(u);
    if (u == req.dst) return labels[u];
    const Label lu = labels[u];
    for (std::size_t i = 0; i < topo.links().size(); ++i) {
      if (!weights[i]) continue;
      const auto& l = topo.links()[i];
      std::string v;
      if (l.a == u) v = l.b;
      else if (l.b == u) v = l.a;
      else continue;
      if (done.count(v)) continue;
      Label cand = lu;
      cand.cost += *weights[i];
      cand.path.push_back(v);
      cand.links.push_back(i);
      cand.costs.push_back(*weights[i]);
      auto it = labels.find(v);
      if (it == labels.end() || better(cand.cost, cand.path, it->second.cost, it->second.path)) labels[v] = cand;
    }
  }
  return std::nullopt;
}

}  // namespace

RouteResult route(const Topology& topo, const Request& req) {
  if (!topo.has_node(req.src) || !topo.has_node(req.dst))
    fail(ErrorCode::ConfigInvalid, "request names an unknown node");
  if (req.src == req.dst) fail(ErrorCode::ConfigInvalid, "request source and destination must differ");
  std::vector<std::optional<double>> all(topo.links().size()), usable(topo.links().size());
  for (std::size_t i = 0; i < topo.links().size(); ++i) {
    all[i] = 1.0;
    try {
      usable[i] = link_weight(topo.links()[i], req);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnreachableThreshold) throw;
    }
  }
  if (auto best = shortest(topo, req, usable)) return {best->path, best->cost, best->costs, best->links};
  if (shortest(topo, req, all))
    fail(ErrorCode::UnreachableThreshold, "every route from " + req.src + " to " + req.dst +
                                              " crosses a link that cannot reach the threshold fidelity");
  fail(ErrorCode::Unroutable, "no path from " + req.src + " to " + req.dst);
}

}  // namespace qnet::network
