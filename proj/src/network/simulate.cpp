#include <algorithm>
#include <cmath>
#include <queue>

#include "qnet/channels.hpp"
#include "qnet/error.hpp"
#include "qnet/network.hpp"

namespace qnet::network {
namespace {

using entangled::BellLabel;
using protocols::PauliFrame;

constexpr double kSecondsPerKm = protocols::kFiberSecondsPerMetre * 1000.0;

DensityMatrix store(DensityMatrix rho, const NodeSpec& node, double wait, std::size_t qubit) {
  if (wait <= 0.0) return rho;
  if (std::isfinite(node.T1_s)) rho = channels::apply_channel(rho, channels::RelaxationT1{wait, node.T1_s}, qubit);
  if (std::isfinite(node.T2_s)) rho = channels::apply_channel(rho, channels::DephasingT2{wait, node.T2_s}, qubit);
  return rho;
}

// The link as seen walking the path from `from`: its left end is `from`.
LinkSpec oriented(const Link& l, const std::string& from) {
  LinkSpec s = l.spec;
  if (l.a == from) return s;
  std::swap(s.left, s.right);
  if (s.bsa_position_km) s.bsa_position_km = s.length_km - *s.bsa_position_km;
  return s;
}

struct LinkPair {
  DensityMatrix pair;  // PhiPlus frame, qubit 0 at the link's left path node
  double ready_s;
  std::uint64_t attempts;
};

// A pair on one link after `rounds` of purification, starting at t0.
// `left`/`right` are the nodes at the path-left and path-right ends.
LinkPair make_link_pair(const LinkSpec& spec, unsigned rounds, const NodeSpec& left, const NodeSpec& right, double t0,
                        RngStream& rng) {
  if (rounds == 0) {
    auto gen = linklayer::generate_link_entanglement(spec, rng, false, 100'000'000, t0);
    const BellLabel label = *gen.success.label;
    DensityMatrix pair = protocols::apply_frame(*gen.success.post_pair, PauliFrame::of(label), 1);
    return {std::move(pair), t0 + gen.elapsed_s, gen.attempts};
  }
  double t = t0;
  std::uint64_t attempts = 0;
  for (;;) {
    LinkPair first = make_link_pair(spec, rounds - 1, left, right, t, rng);
    LinkPair second = make_link_pair(spec, rounds - 1, left, right, first.ready_s, rng);
    attempts += first.attempts + second.attempts;
    const double wait = second.ready_s - first.ready_s;
    DensityMatrix held = store(store(std::move(first.pair), left, wait, 0), right, wait, 1);
    const auto res = protocols::purify(held, second.pair, rng);
    // Both ends exchange their Z results before deciding.
    t = second.ready_s + spec.length_km * kSecondsPerKm;
    if (res.kept) return {*res.post, t, attempts};
  }
}

}  // namespace

EndToEndResult end_to_end(const Topology& topo, const Request& req, RngStream& rng) {
  if (req.pairs_wanted < 1) fail(ErrorCode::ConfigInvalid, "pairs_wanted must be >= 1");
  EndToEndResult out{route(topo, req), {}, 0.0};
  const auto& path = out.route.path;
  topo.check_repeater_memories(path);
  const std::size_t hops = out.route.link_indices.size();

  std::vector<unsigned> rounds(hops);
  std::vector<double> position_km(path.size(), 0.0);  // distance from src along the path
  for (std::size_t i = 0; i < hops; ++i) {
    const Link& l = topo.links()[out.route.link_indices[i]];
    std::optional<double> th;
    if (req.f_min > 0.0) th = req.f_min;
    rounds[i] = linklayer::link_cost(l.spec, th).purification_rounds;
    position_km[i + 1] = position_km[i] + l.spec.length_km;
  }
  const double total_km = position_km.back();

  double t_start = 0.0;
  for (unsigned k = 0; k < req.pairs_wanted; ++k) {
    Delivery d{DensityMatrix::maximally_mixed(2), 0.0, 0.0, {}, {}, 0};
    std::vector<LinkPair> pairs;
    for (std::size_t i = 0; i < hops; ++i) {
      const Link& l = topo.links()[out.route.link_indices[i]];
      LinkPair lp = make_link_pair(oriented(l, path[i]), rounds[i], topo.node(path[i]), topo.node(path[i + 1]),
                                   t_start, rng);
      d.link_ready_s.push_back(lp.ready_s);
      d.link_attempts += lp.attempts;
      pairs.push_back(std::move(lp));
    }

    DensityMatrix current = pairs[0].pair;
    double ready = pairs[0].ready_s;
    PauliFrame frame{};
    double delivered_at = ready;
    const NodeSpec& src = topo.node(path.front());
    for (std::size_t i = 1; i < hops; ++i) {
      const NodeSpec& mid = topo.node(path[i]);
      const NodeSpec& far = topo.node(path[i + 1]);
      const double t = std::max(ready, pairs[i].ready_s);
      DensityMatrix left = store(store(std::move(current), src, t - ready, 0), mid, t - ready, 1);
      DensityMatrix right = store(store(pairs[i].pair, mid, t - pairs[i].ready_s, 0), far, t - pairs[i].ready_s, 1);
      const auto sw = protocols::entanglement_swap(left, right, rng, frame, PauliFrame{});
      current = sw.state_ac;
      frame = sw.frame;
      ready = t;
      const double notify = t + (total_km - position_km[i]) * kSecondsPerKm;
      d.swap_log.push_back({path[i], sw.outcome, frame, t, notify});
      delivered_at = std::max(delivered_at, notify);
    }
    delivered_at = std::max(delivered_at, ready);
    const NodeSpec& dst = topo.node(path.back());
    current = store(store(std::move(current), src, delivered_at - ready, 0), dst, delivered_at - ready, 1);
    d.pair = protocols::apply_frame(current, frame, 1);
    d.fidelity = state::fidelity(d.pair, entangled::bell_state(BellLabel::PhiPlus));
    d.elapsed_s = delivered_at;
    out.deliveries.push_back(std::move(d));
    t_start = delivered_at;
  }
  out.elapsed_s = t_start;
  return out;
}

// ---------------------------------------------------------------------------
// Multiplexing

std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::RoundRobinTD ? "round_robin_td" : "greedy_fcfs";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "round_robin_td") return Scheme::RoundRobinTD;
  if (text == "greedy_fcfs") return Scheme::GreedyFCFS;
  fail(ErrorCode::ConfigInvalid, "unknown multiplexing scheme '" + std::string(text) + "'");
}

namespace {

struct LinkState {
  std::size_t link;
  std::vector<std::size_t> users;  // request indices, ascending
  std::vector<bool> filled;        // one buffered pair per user
  double slot_s;                   // duration of one attempt
  double p_success;                // per attempt
  bool running = false;
  std::size_t rr_next = 0;
  std::uint64_t generated = 0, consumed = 0;
};

struct Event {
  double t;
  std::size_t link_state;
  bool operator>(const Event& o) const { return t != o.t ? t > o.t : link_state > o.link_state; }
};

}  // namespace

MultiplexReport multiplex(const Topology& topo, const std::vector<Request>& requests, Scheme scheme, double horizon_s,
                          RngStream& rng) {
  if (!(horizon_s > 0.0)) fail(ErrorCode::ConfigInvalid, "horizon_s must be > 0");
  if (requests.empty()) fail(ErrorCode::ConfigInvalid, "multiplex needs at least one request");

  std::vector<RouteResult> routes;
  for (const auto& r : requests) routes.push_back(route(topo, r));

  std::vector<LinkState> states;
  std::map<std::size_t, std::size_t> state_of_link;
  for (std::size_t q = 0; q < routes.size(); ++q)
    for (std::size_t li : routes[q].link_indices) {
      auto [it, fresh] = state_of_link.try_emplace(li, states.size());
      if (fresh) states.push_back(LinkState{li, {}, {}, 0.0, 0.0});
      states[it->second].users.push_back(q);
      states[it->second].filled.push_back(false);
    }
  // Per-link pair time uses the weight the route saw for the first user.
  for (auto& st : states) {
    const Link& l = topo.links()[st.link];
    const double cost = link_weight(l, requests[st.users.front()]);
    const double period = linklayer::attempt_period(l.spec);
    st.slot_s = std::min(period, cost);
    st.p_success = st.slot_s / cost;
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  auto start = [&](std::size_t s, double now) {
    states[s].running = true;
    queue.push({now + static_cast<double>(rng.geometric(states[s].p_success)) * states[s].slot_s, s});
  };
  for (std::size_t s = 0; s < states.size(); ++s) start(s, 0.0);

  std::vector<std::uint64_t> delivered(requests.size(), 0);
  auto slot_of = [&](const LinkState& st, std::size_t q) {
    return static_cast<std::size_t>(std::find(st.users.begin(), st.users.end(), q) - st.users.begin());
  };
  auto has_free = [](const LinkState& st) { return std::find(st.filled.begin(), st.filled.end(), false) != st.filled.end(); };

  while (!queue.empty() && queue.top().t <= horizon_s) {
    const Event ev = queue.top();
    queue.pop();
    LinkState& st = states[ev.link_state];
    st.running = false;
    ++st.generated;

    const std::size_t n = st.users.size();
    std::size_t pick = n;
    if (scheme == Scheme::RoundRobinTD) {
      for (std::size_t k = 0; k < n && pick == n; ++k)
        if (!st.filled[(st.rr_next + k) % n]) pick = (st.rr_next + k) % n;
      if (pick < n) st.rr_next = (pick + 1) % n;
    } else {
      for (std::size_t k = 0; k < n && pick == n; ++k)
        if (!st.filled[k]) pick = k;
    }
    if (pick < n) {
      st.filled[pick] = true;
      const std::size_t q = st.users[pick];
      bool complete = true;
      for (std::size_t li : routes[q].link_indices) {
        const LinkState& other = states[state_of_link[li]];
        complete = complete && other.filled[slot_of(other, q)];
      }
      if (complete) {
        ++delivered[q];
        for (std::size_t li : routes[q].link_indices) {
          const std::size_t s = state_of_link[li];
          states[s].filled[slot_of(states[s], q)] = false;
          ++states[s].consumed;
          if (!states[s].running && s != ev.link_state) start(s, ev.t);
        }
      }
    }
    if (has_free(st)) start(ev.link_state, ev.t);
  }

  MultiplexReport rep{{}, {}, 0, 0, false, horizon_s};
  const std::uint64_t most = *std::max_element(delivered.begin(), delivered.end());
  for (std::size_t q = 0; q < requests.size(); ++q) {
    const bool starved = delivered[q] == 0 && most > 0;
    rep.starvation = rep.starvation || starved;
    rep.requests.push_back({q, routes[q].path, delivered[q], static_cast<double>(delivered[q]) / horizon_s, starved});
  }
  std::sort(states.begin(), states.end(), [](const LinkState& a, const LinkState& b) { return a.link < b.link; });
  for (const auto& st : states) {
    const Link& l = topo.links()[st.link];
    rep.links.push_back({st.link, l.a, l.b, st.users.size(), st.generated, st.consumed});
    if (st.users.size() > rep.max_users) {
      rep.max_users = st.users.size();
      rep.max_contention_link = st.link;
    }
  }
  return rep;
}

}  // namespace qnet::network
