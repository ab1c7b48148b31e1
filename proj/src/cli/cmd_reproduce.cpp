#include <algorithm>
#include <cmath>
#include <numbers>

#include "commands.hpp"
#include "qnet/error.hpp"
#include "qnet/photonics.hpp"
#include "qnet/protocols.hpp"

// Worked numbers checked end to end: each row carries the computed value, the
// reference quoted alongside it, the value compared against and the tolerance.

namespace qnet::cli {
namespace {

using entangled::BellLabel;
using state::DensityMatrix;

struct Table {
  Sink& sink;
  void row(const std::string& item, double computed, const std::string& reference, double expected, double tol) {
    const bool ok = std::abs(computed - expected) <= tol;
    sink.add({{"record", "reproduce"},
              {"item", item},
              {"computed", computed},
              {"reference", reference},
              {"expected", expected},
              {"tolerance", tol},
              {"status", ok ? "PASS" : "FAIL"}});
  }
  void text_row(const std::string& item, const std::string& computed, const std::string& reference,
                const std::string& expected) {
    sink.add({{"record", "reproduce"},
              {"item", item},
              {"computed", computed},
              {"reference", reference},
              {"expected", expected},
              {"tolerance", 0.0},
              {"status", computed == expected ? "PASS" : "FAIL"}});
  }
};

network::Topology unit_topology(const std::vector<std::string>& ids,
                                const std::vector<std::tuple<std::string, std::string, double>>& links) {
  std::vector<network::NodeSpec> nodes;
  for (const auto& id : ids) nodes.push_back({id});
  std::vector<network::Link> ls;
  for (const auto& [a, b, cost] : links) {
    linklayer::LinkSpec spec;
    spec.length_km = 1.0;
    ls.push_back({a, b, spec, cost});
  }
  return network::Topology(nodes, ls);
}

// Sampled rows: the reference tolerance, widened to five standard errors of a
// proportion p estimated from `count` draws when the sample is small.
double sampled_tol(double fixed, double p, double count) {
  return std::max(fixed, 5.0 * std::sqrt(p * (1.0 - p) / std::max(count, 1.0)));
}

void run_reproduce(Context& ctx, std::uint64_t mc_rounds) {
  Table t{ctx.sink};
  const double root2 = std::numbers::sqrt2;
  const double n = static_cast<double>(mc_rounds);

  // CHSH
  const auto psi = entangled::ChshSetting::psi_plus();
  const DensityMatrix psi_plus = entangled::bell_density(BellLabel::PsiPlus);
  t.row("CHSH S, Psi+ analytic", entangled::chsh_value(psi_plus, psi), "2√2", 2.0 * root2, 1e-9);
  {
    auto rng = ctx.rng.split(1);
    const auto counts = entangled::sample_chsh_counts(psi_plus, psi, mc_rounds, rng);
    t.row("CHSH S, Psi+ sampled", entangled::chsh_from_counts(counts, psi.signs), "2√2", 2.0 * root2,
          std::max(0.05, 5.0 * std::sqrt(8.0 / n)));
  }
  {
    const entangled::ChshCounts table{{{0.04, 0.26, 0.60, 0.10},
                                       {0.04, 0.26, 0.60, 0.10},
                                       {0.16, 0.34, 0.48, 0.02},
                                       {0.48, 0.02, 0.16, 0.34}}};
    t.row("CHSH S from probability table", entangled::chsh_from_counts(table, psi.signs), "2.72", 2.72, 1e-6);
  }
  using protocols::GameStrategy;
  t.row("CHSH game always_zero", protocols::chsh_game_win_probability(GameStrategy::AlwaysZero), "75%", 0.75, 0.0);
  t.row("CHSH game quantum analytic", protocols::chsh_game_win_probability(GameStrategy::Quantum), "≈85%",
        (2.0 + root2) / 4.0, 1e-9);
  {
    auto rng = ctx.rng.split(2);
    t.row("CHSH game quantum sampled", protocols::chsh_game(GameStrategy::Quantum, mc_rounds, rng).win_rate(), "≈85%",
          (2.0 + root2) / 4.0, sampled_tol(0.01, (2.0 + root2) / 4.0, n));
  }

  // Teleportation
  {
    auto rng = ctx.rng.split(3);
    const DensityMatrix resource = entangled::bell_density(BellLabel::PhiPlus);
    const std::uint64_t trials = std::min<std::uint64_t>(mc_rounds, 10000);
    std::array<double, 4> freq{};
    double worst = 1.0;
    for (std::uint64_t k = 0; k < trials; ++k) {
      const auto in = state::PureState::from_bloch_angles(std::acos(1.0 - 2.0 * rng.uniform()),
                                                          2.0 * std::numbers::pi * rng.uniform());
      const auto out = protocols::teleport(DensityMatrix::from_pure(in), resource, rng);
      worst = std::min(worst, state::fidelity(out.bob_state, in));
      freq[static_cast<std::size_t>(out.bsm_label)] += 1.0 / static_cast<double>(trials);
    }
    double dev = 0.0;
    for (double f : freq) dev = std::max(dev, std::abs(f - 0.25));
    t.row("Teleport worst fidelity", worst, "1", 1.0, 1e-9);
    t.row("Teleport max |freq - 1/4|", dev, "outcomes equally likely", 0.0,
          sampled_tol(0.02, 0.25, static_cast<double>(trials)));
  }

  // Swapping and purification
  {
    using protocols::PauliFrame;
    const DensityMatrix phi = entangled::bell_density(BellLabel::PhiPlus);
    const DensityMatrix noisy = protocols::bitflip_pair(0.9);
    const auto target = entangled::bell_state(BellLabel::PhiPlus);
    double worst_ideal = 1.0, noisy_f = 1.0;
    for (auto o : entangled::kBellLabels) {
      worst_ideal = std::min(worst_ideal, state::fidelity(protocols::entanglement_swap_branch(phi, phi, o).corrected, target));
      noisy_f = std::min(noisy_f, state::fidelity(protocols::entanglement_swap_branch(noisy, phi, o).corrected, target));
    }
    t.row("Swap Phi+ x Phi+ corrected fidelity", worst_ideal, "outcome-matched Bell pair", 1.0, 1e-9);
    t.row("Swap with F=0.9 link", noisy_f, "F", 0.9, 1e-9);
    const auto p = protocols::purify_exact(protocols::bitflip_pair(0.8), protocols::bitflip_pair(0.8));
    t.row("Purify F=0.8 keep probability", p.keep_probability, "0.68", 0.68, 1e-9);
    t.row("Purify F=0.8 kept fidelity", state::fidelity(p.kept_state, target), "0.941176", 0.64 / 0.68, 1e-9);
  }

  // BB84
  {
    protocols::Bb84Config cfg;
    cfg.n = mc_rounds;
    auto rng = ctx.rng.split(4);
    auto rep = protocols::bb84(cfg, rng);
    t.row("BB84 no-Eve mismatch rate",
          rep.test_count ? static_cast<double>(rep.mismatch_count) / static_cast<double>(rep.test_count) : 0.0, "0",
          0.0, 0.0);
    cfg.eve = protocols::EveMode::InterceptResend;
    rep = protocols::bb84(cfg, rng);
    t.row("BB84 intercept-resend mismatch rate",
          static_cast<double>(rep.mismatch_count) / static_cast<double>(std::max<std::size_t>(rep.test_count, 1)), "1/4",
          0.25, sampled_tol(0.01, 0.25, static_cast<double>(rep.test_count)));
    t.row("P(25) detection", protocols::bb84_detection_probability(25), "≈0.999", 0.999, 0.001);
    protocols::Bb84Config small;
    small.n = 200;
    small.eve = protocols::EveMode::InterceptResend;
    small.test_count = 25;
    const std::uint64_t runs = std::max<std::uint64_t>(mc_rounds / 20, 100);
    std::uint64_t caught = 0;
    for (std::uint64_t r = 0; r < runs; ++r) caught += protocols::bb84(small, rng).detection_flag ? 1 : 0;
    t.row("P(25) detection sampled", static_cast<double>(caught) / static_cast<double>(runs), "≈0.999",
          protocols::bb84_detection_probability(25),
          sampled_tol(0.003, protocols::bb84_detection_probability(25), static_cast<double>(runs)));
  }

  // E91
  {
    protocols::E91Config cfg;
    cfg.n_rounds = mc_rounds;
    auto rng = ctx.rng.split(5);
    const auto r = protocols::e91(cfg, rng);
    t.row("E91 key round fraction", static_cast<double>(r.classes.key) / n, "2/9", 2.0 / 9.0, sampled_tol(0.01, 2.0 / 9.0, n));
    t.row("E91 CHSH round fraction", static_cast<double>(r.classes.chsh) / n, "4/9", 4.0 / 9.0, sampled_tol(0.01, 4.0 / 9.0, n));
    t.row("E91 discard round fraction", static_cast<double>(r.classes.discard) / n, "3/9", 3.0 / 9.0, sampled_tol(0.01, 3.0 / 9.0, n));
    std::size_t mism = 0;
    for (std::size_t i = 0; i < r.key_report.alice_sifted.size(); ++i)
      mism += r.key_report.alice_sifted[i] != r.key_report.bob_sifted[i];
    t.row("E91 sifted key mismatches", static_cast<double>(mism), "0", 0.0, 0.0);
  }

  // Fiber and photonics
  t.row("Survival 20 dB/km over 1 km", channels::survival_probability(20.0, 1.0), "0.01", 0.01, 1e-15);
  t.row("Survival 0.18 dB/km over 20 km", channels::survival_probability(0.18, 20.0), "0.4365", 0.4365, 0.001);
  t.row("log10 survival 0.1 dB/km over 1000 km", channels::log10_survival(0.1, 1000.0), "1e-10", -10.0, 1e-12);
  {
    const double wait = channels::expected_wait(channels::survival_probability(0.1, 1000.0), 1.0);
    t.row("Expected wait at 1 Hz, years", wait / (365.25 * 86400.0), "≈317 years", 317.0, 0.5);
  }
  {
    const auto d = photonics::dispersion_delay({1.5, 1.489});
    t.row("Mode dispersion (1.500, 1.489), ns/km", d.dt_per_km_s * 1e9, "37 ns/km", 37.0, 0.1);
    t.row("Pulse spread, m/km", d.spread_m_per_km, "7.4 m/km", 7.4, 0.05);
  }
  t.row("Poisson lambda=0.1 P(0)", photonics::attenuated_poisson(0.1, 0), "90.5%", std::exp(-0.1), 1e-6);
  t.row("Poisson lambda=0.1 P(1)", photonics::attenuated_poisson(0.1, 1), "9.1%", 0.1 * std::exp(-0.1), 1e-6);
  t.row("Poisson lambda=0.1 P(2)", photonics::attenuated_poisson(0.1, 2), "0.4% (rounded)", 0.005 * std::exp(-0.1),
        1e-6);
  {
    const auto a = photonics::laser_fixed_points({2.0, 3.0, 4.0, 0.5});
    t.row("Laser threshold pump k/G", a.threshold_pump, "N0 = k/G", 2.0, 1e-12);
    t.row("Laser nonzero fixed point", a.fixed_points.back().n, "(G N0 - k)/(alpha G)", (6.0 - 4.0) / (0.5 * 2.0),
          1e-12);
  }

  // Link layer
  {
    auto rng = ctx.rng.split(6);
    std::uint64_t kept = 0;
    for (std::uint64_t k = 0; k < mc_rounds; ++k) {
      const auto label = entangled::kBellLabels[rng.below(4)];
      kept += linklayer::photonic_bsa(label, true, true, 1.0, rng).kept ? 1 : 0;
    }
    t.row("BSA keep rate, uniform Bell inputs", static_cast<double>(kept) / n, "50%", 0.5, sampled_tol(0.01, 0.5, n));
    linklayer::LinkSpec spec;
    spec.length_km = 2.0;
    spec.bsa_position_km = 1.0;
    const auto tr = linklayer::attempt(spec, 0, 0.0, rng);
    t.row("Round trip, 1 km legs (us)", (tr.t_heralded - tr.t_emit) * 1e6, "10 us", 10.0, 1e-9);
  }
  {
    const DensityMatrix one = DensityMatrix::from_pure(state::kets::one());
    const auto decayed = channels::apply_channel(one, channels::RelaxationT1{1.0, 1.0}, 0);
    t.row("P(|1>) after t = T1", decayed(1, 1).real(), "1/e", std::exp(-1.0), 1e-9);
    const auto plus = state::kets::plus();
    const auto dephased = channels::apply_channel(DensityMatrix::from_pure(plus), channels::DephasingT2{1.0, 1.0}, 0);
    t.row("Dephasing weight at t = T2", 2.0 * state::fidelity(dephased, plus) - 1.0, "e^{-t/T2}", std::exp(-1.0), 1e-9);
  }

  // Network
  {
    const auto left = unit_topology({"A", "B", "C", "D", "E"}, {{"A", "B", 1.0},
                                                                 {"B", "E", 1.0},
                                                                 {"A", "D", 1.0},
                                                                 {"D", "E", 1.0},
                                                                 {"D", "C", 1.0},
                                                                 {"C", "E", 1.0}});
    t.text_row("Route A to E, unit costs", join(network::route(left, {"A", "E"}).path, "-"), "two hops", "A-B-E");

    const auto right = unit_topology({"A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K"},
                                     {{"A", "E", 1.0},
                                      {"B", "E", 1.0},
                                      {"C", "E", 1.0},
                                      {"D", "E", 1.0},
                                      {"E", "F", 1.0},
                                      {"F", "I", 1.0},
                                      {"I", "K", 1.0},
                                      {"I", "J", 1.0},
                                      {"F", "H", 1.0},
                                      {"F", "G", 1.0}});
    auto rng = ctx.rng.split(7);
    const auto rep = network::multiplex(right, {{"A", "K"}, {"B", "J"}, {"C", "H"}, {"D", "G"}},
                                        network::Scheme::RoundRobinTD, 100.0, rng);
    const auto& l = right.links()[rep.max_contention_link];
    t.text_row("Most contended link", l.a + "-" + l.b, "E-F", "E-F");
    t.row("Users on the most contended link", static_cast<double>(rep.max_users), "4", 4.0, 0.0);

    const auto shared = unit_topology({"A", "B", "M", "Z"}, {{"A", "M", 0.01}, {"B", "M", 0.01}, {"M", "Z", 1.0}});
    const double horizon = 1e5;
    auto solo_rng = ctx.rng.split(8);
    const double solo =
        network::multiplex(shared, {{"A", "Z"}}, network::Scheme::RoundRobinTD, horizon, solo_rng).requests[0].pairs_per_s;
    auto both_rng = ctx.rng.split(9);
    const auto both = network::multiplex(shared, {{"A", "Z"}, {"B", "Z"}}, network::Scheme::RoundRobinTD, horizon, both_rng);
    for (std::size_t q = 0; q < 2; ++q)
      t.row("Shared-link throughput / half solo, request " + std::to_string(q), both.requests[q].pairs_per_s / (0.5 * solo),
            "fair share", 1.0, 0.1);
  }
}

}  // namespace

Runner parse_reproduce(Section& s) {
  const auto rounds = s.count("rounds", 100000);
  if (rounds < 1000) s.error("rounds", "must be >= 1000");
  return [=](Context& ctx) { run_reproduce(ctx, rounds); };
}

}  // namespace qnet::cli
