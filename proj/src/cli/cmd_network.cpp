#include "commands.hpp"
#include "qnet/error.hpp"

namespace qnet::cli {
namespace {

using linklayer::AttemptTrace;

std::string path_text(const std::vector<std::string>& path) { return join(path, "-"); }

Record attempt_record(const AttemptTrace& t) {
  Record r{{"record", "attempt"},
           {"index", t.index},
           {"t_emit", t.t_emit},
           {"t_bsa", t.t_bsa},
           {"t_heralded", t.t_heralded},
           {"round_trip_s", t.t_heralded - t.t_emit},
           {"survived_left", t.survived_left},
           {"survived_right", t.survived_right},
           {"pattern", linklayer::to_string(t.bsa.pattern)},
           {"pattern_right", nullptr},
           {"kept", t.bsa.kept && (!t.bsa_right || t.bsa_right->kept)},
           {"label", nullptr},
           {"pair_fidelity", nullptr}};
  if (t.bsa_right) r["pattern_right"] = linklayer::to_string(t.bsa_right->pattern);
  if (t.label) r["label"] = entangled::to_string(*t.label);
  if (t.pair_fidelity) r["pair_fidelity"] = *t.pair_fidelity;
  return r;
}

}  // namespace

Runner parse_link(Section& s) {
  const linklayer::LinkSpec spec = parse_link_spec(s, linklayer::LinkSpec{});
  const auto attempts = s.count("attempts", 10);
  const auto generations = s.count("generations", 100);
  const auto mc_trials = s.count("monte_carlo_trials", 0);

  return [=](Context& ctx) {
    const auto geo = linklayer::geometry(spec);
    const double p = linklayer::herald_probability(spec);
    const double period = linklayer::attempt_period(spec);
    ctx.sink.add({{"record", "link"},
                  {"architecture", linklayer::to_string(spec.architecture)},
                  {"length_km", spec.length_km},
                  {"herald_probability", p},
                  {"attempt_period_s", period},
                  {"herald_latency_s", geo.herald_latency_s},
                  {"bsa_latency_s", geo.bsa_latency_s},
                  {"left_wait_s", geo.left_wait_s},
                  {"right_wait_s", geo.right_wait_s},
                  {"heralded_fidelity", linklayer::heralded_fidelity(spec)}});

    auto trace_rng = ctx.rng.split(1);
    for (std::uint64_t i = 0; i < attempts; ++i)
      ctx.sink.add(attempt_record(linklayer::attempt(spec, i, static_cast<double>(i) * period, trace_rng)));

    if (generations > 0) {
      auto rng = ctx.rng.split(2);
      double sum_attempts = 0.0, sum_elapsed = 0.0;
      for (std::uint64_t g = 0; g < generations; ++g) {
        const auto gen = linklayer::generate_link_entanglement(spec, rng);
        sum_attempts += static_cast<double>(gen.attempts);
        sum_elapsed += gen.elapsed_s;
      }
      const double n = static_cast<double>(generations);
      ctx.sink.add({{"record", "generation_summary"},
                    {"generations", generations},
                    {"mean_attempts", sum_attempts / n},
                    {"expected_attempts", p > 0.0 ? 1.0 / p : 0.0},
                    {"mean_elapsed_s", sum_elapsed / n}});
    }

    const auto cost = linklayer::link_cost(spec);
    ctx.sink.add({{"record", "link_cost"},
                  {"threshold_fidelity", spec.threshold_fidelity},
                  {"seconds_per_bell_pair", cost.seconds_per_bell_pair},
                  {"purification_rounds", cost.purification_rounds},
                  {"base_time_s", cost.base_time_s},
                  {"raw_fidelity", cost.raw_fidelity},
                  {"final_fidelity", cost.final_fidelity},
                  {"pair_multiplier", cost.pair_multiplier}});
    if (mc_trials > 0) {
      auto rng = ctx.rng.split(3);
      ctx.sink.add({{"record", "link_cost_monte_carlo"},
                    {"trials", mc_trials},
                    {"seconds_per_bell_pair", linklayer::link_cost_monte_carlo(spec, rng, mc_trials)},
                    {"analytic", cost.seconds_per_bell_pair}});
    }
  };
}

Runner parse_route(Section& s) {
  auto topo_section = s.child("topology");
  const network::Topology topo = parse_topology(topo_section);
  const network::Request req = parse_request(s);
  for (const auto& id : {req.src, req.dst})
    if (!topo.has_node(id)) s.error(id == req.src ? "src" : "dst", "unknown node '" + id + "'");

  return [=](Context& ctx) {
    const auto r = network::route(topo, req);
    ctx.sink.add({{"record", "route"},
                  {"src", req.src},
                  {"dst", req.dst},
                  {"path", path_text(r.path)},
                  {"hops", r.link_indices.size()},
                  {"total_cost_s", r.total_cost_s}});
    for (std::size_t i = 0; i < r.link_indices.size(); ++i)
      ctx.sink.add({{"record", "route_hop"},
                    {"hop", i},
                    {"a", r.path[i]},
                    {"b", r.path[i + 1]},
                    {"link", r.link_indices[i]},
                    {"cost_s", r.per_link_costs[i]}});
  };
}

Runner parse_net(Section& s) {
  auto topo_section = s.child("topology");
  const network::Topology topo = parse_topology(topo_section);
  const std::string mode = s.text("mode", "end_to_end");
  if (mode != "end_to_end" && mode != "multiplex") s.error("mode", "expected end_to_end or multiplex");
  std::vector<network::Request> requests;
  for (auto& r : s.list("requests")) {
    requests.push_back(parse_request(r));
    for (const auto& id : {requests.back().src, requests.back().dst})
      if (!topo.has_node(id)) r.error(id == requests.back().src ? "src" : "dst", "unknown node '" + id + "'");
  }
  if (requests.empty()) s.error("requests", "at least one request is required");
  std::optional<network::Scheme> scheme;
  std::optional<double> horizon;
  if (mode == "multiplex") {
    scheme = s.choice<network::Scheme>("scheme", "round_robin_td",
                                       [](const std::string& t) { return network::parse_scheme(t); });
    horizon = s.number("horizon_s", 1000.0);
    if (!(*horizon > 0.0)) s.error("horizon_s", "must be > 0");
  }

  return [=](Context& ctx) {
    if (mode == "end_to_end") {
      for (std::size_t q = 0; q < requests.size(); ++q) {
        auto rng = ctx.rng.split(q);
        const auto res = network::end_to_end(topo, requests[q], rng);
        for (std::size_t k = 0; k < res.deliveries.size(); ++k) {
          const auto& d = res.deliveries[k];
          for (const auto& sw : d.swap_log)
            ctx.sink.add({{"record", "swap"},
                          {"request", q},
                          {"pair", k},
                          {"node", sw.node},
                          {"outcome", entangled::to_string(sw.outcome)},
                          {"frame", sw.frame.word()},
                          {"time_s", sw.time_s},
                          {"notify_s", sw.notify_s}});
          ctx.sink.add({{"record", "delivery"},
                        {"request", q},
                        {"pair", k},
                        {"src", requests[q].src},
                        {"dst", requests[q].dst},
                        {"path", path_text(res.route.path)},
                        {"fidelity", d.fidelity},
                        {"elapsed_s", d.elapsed_s},
                        {"link_attempts", d.link_attempts}});
        }
      }
      return;
    }
    const auto rep = network::multiplex(topo, requests, *scheme, *horizon, ctx.rng);
    for (const auto& t : rep.requests)
      ctx.sink.add({{"record", "throughput"},
                    {"request", t.request},
                    {"src", requests[t.request].src},
                    {"dst", requests[t.request].dst},
                    {"path", path_text(t.path)},
                    {"delivered", t.delivered},
                    {"pairs_per_s", t.pairs_per_s},
                    {"starved", t.starved}});
    for (const auto& l : rep.links)
      ctx.sink.add({{"record", "link_usage"},
                    {"link", l.link},
                    {"a", l.a},
                    {"b", l.b},
                    {"users", l.users},
                    {"generated", l.generated},
                    {"consumed", l.consumed}});
    const auto& busiest = topo.links()[rep.max_contention_link];
    ctx.sink.add({{"record", "multiplex"},
                  {"scheme", network::to_string(*scheme)},
                  {"horizon_s", rep.horizon_s},
                  {"max_contention_link", busiest.a + "-" + busiest.b},
                  {"max_users", rep.max_users},
                  {"starvation", rep.starvation}});
  };
}

}  // namespace qnet::cli
