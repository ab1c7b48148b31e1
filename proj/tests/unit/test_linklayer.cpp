#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qnet/error.hpp"
#include "qnet/linklayer.hpp"

using namespace qnet;
using namespace qnet::linklayer;

namespace {
constexpr double kTau = 5e-6;  // seconds per km of fiber

LinkSpec spec(Architecture a, double L) {
  LinkSpec s;
  s.architecture = a;
  s.length_km = L;
  s.pair_source_rate_hz = 1e6;
  return s;
}
}  // namespace

TEST_CASE("photonic analyzer distinguishes only the Psi states") {
  RngStream rng(81);
  for (int i = 0; i < 200; ++i) {
    const auto m = photonic_bsa(BellLabel::PsiMinus, true, true, 1.0, rng);
    CHECK(m.kept);
    CHECK((m.pattern == ClickPattern::D1D4 || m.pattern == ClickPattern::D2D3));
    CHECK(m.projected == BellLabel::PsiMinus);
    const auto p = photonic_bsa(BellLabel::PsiPlus, true, true, 1.0, rng);
    CHECK((p.pattern == ClickPattern::D1D2 || p.pattern == ClickPattern::D3D4));
    CHECK(p.projected == BellLabel::PsiPlus);
    for (auto phi : {BellLabel::PhiPlus, BellLabel::PhiMinus}) {
      const auto f = photonic_bsa(phi, true, true, 1.0, rng);
      CHECK_FALSE(f.kept);
      CHECK(f.pattern == ClickPattern::SingleClick);
    }
    const auto lost = photonic_bsa(BellLabel::PsiMinus, true, false, 1.0, rng);
    CHECK_FALSE(lost.kept);
    CHECK(lost.pattern == ClickPattern::SingleClick);
    CHECK(photonic_bsa(BellLabel::PsiMinus, false, false, 1.0, rng).pattern == ClickPattern::NoClick);
  }
  // Uniform Bell inputs with ideal detectors keep half the rounds.
  int kept = 0;
  for (int i = 0; i < 40000; ++i) kept += photonic_bsa(entangled::kBellLabels[rng.below(4)], true, true, 1.0, rng).kept;
  CHECK(std::abs(kept / 40000.0 - 0.5) < 0.01);
}

TEST_CASE("circuit Bell measurement") {
  RngStream rng(82);
  for (auto l : entangled::kBellLabels) {
    CHECK(bsm_circuit(entangled::bell_state(l), rng).label == l);
    const auto p = bsm_probabilities(entangled::bell_density(l));
    CHECK(test::close(p[static_cast<std::size_t>(l)], 1.0));
  }
}

TEST_CASE("link geometry and latency") {
  // Memory-memory over 1 km: the photon goes out and the herald comes back.
  const auto mm = geometry(spec(Architecture::MM, 1.0));
  CHECK(test::close(mm.herald_latency_s, 2 * kTau, 1e-15));
  CHECK(test::close(mm.left_wait_s, 10e-6, 1e-15));
  CHECK(test::close(mm.right_wait_s, kTau, 1e-15));

  const auto mim = geometry(spec(Architecture::MIM, 10.0));
  CHECK(test::close(mim.bsa_latency_s, 5 * kTau, 1e-15));
  CHECK(test::close(mim.herald_latency_s, 10 * kTau, 1e-15));

  auto off = spec(Architecture::MIM, 10.0);
  off.bsa_position_km = 2.0;
  const auto g = geometry(off);
  CHECK(test::close(g.bsa_latency_s, 8 * kTau, 1e-15));
  CHECK(test::close(g.left_wait_s, 10 * kTau, 1e-15));
  CHECK(test::close(g.right_wait_s, 16 * kTau, 1e-15));

  const auto msm = geometry(spec(Architecture::MSM, 10.0));
  CHECK(test::close(msm.herald_latency_s, 15 * kTau, 1e-15));

  auto bad = spec(Architecture::MIM, 10.0);
  bad.bsa_position_km = 11.0;
  CHECK_THROWS_AS(geometry(bad), Error);
  auto msm_bad = spec(Architecture::MSM, 10.0);
  msm_bad.pair_source_rate_hz = 0.0;
  CHECK_THROWS_AS(geometry(msm_bad), Error);
}

TEST_CASE("herald probability and sampled success rate") {
  auto s = spec(Architecture::MIM, 20.0);
  s.detector_efficiency = 0.9;
  const double expected = 0.5 * 0.81 * std::pow(10.0, -0.2 * 20.0 / 10.0);
  CHECK(test::close(herald_probability(s), expected));
  auto m = spec(Architecture::MM, 20.0);
  CHECK(test::close(herald_probability(m), 0.5 * std::pow(10.0, -0.4)));

  RngStream rng(83);
  int ok = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ok += attempt(s, i, 0.0, rng).label.has_value();
  CHECK(std::abs(ok / double(n) - expected) < 4 * std::sqrt(expected / n));

  s.attempt_rate_hz = 1e9;  // faster than the herald can return
  CHECK(test::close(attempt_period(s), geometry(s).herald_latency_s));
}

TEST_CASE("heralded pairs decay with storage") {
  auto s = spec(Architecture::MIM, 10.0);
  CHECK(test::close(heralded_fidelity(s), 1.0));
  s.left.T2_s = s.right.T2_s = 1e-3;
  const double f10 = heralded_fidelity(s);
  s.length_km = 50.0;
  const double f50 = heralded_fidelity(s);
  CHECK(f10 < 1.0);
  CHECK(f50 < f10);

  RngStream rng(84);
  const auto gen = generate_link_entanglement(s, rng, true);
  CHECK(gen.attempts == gen.traces.size());
  CHECK(gen.success.label.has_value());
  CHECK(test::close(gen.elapsed_s, gen.success.t_heralded));
}

TEST_CASE("link cost with purification") {
  auto s = spec(Architecture::MIM, 10.0);
  const auto c0 = link_cost(s);
  CHECK(c0.purification_rounds == 0);
  CHECK(test::close(c0.seconds_per_bell_pair, attempt_period(s) / herald_probability(s)));

  s.raw_fidelity = 0.8;
  const auto c1 = link_cost(s, 0.9);
  CHECK(c1.purification_rounds == 1);
  CHECK(test::close(c1.final_fidelity, 0.64 / 0.68));
  CHECK(test::close(c1.pair_multiplier, 2.0 / 0.68));
  CHECK(test::close(c1.seconds_per_bell_pair, c1.base_time_s * 2.0 / 0.68));

  RngStream rng(85);
  const double mc = link_cost_monte_carlo(s, rng, 20000, 0.9);
  CHECK(std::abs(mc / c1.seconds_per_bell_pair - 1.0) < 0.05);

  s.raw_fidelity = 0.5;
  try {
    (void)link_cost(s, 0.9);
    FAIL("expected UnreachableThreshold");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnreachableThreshold);
  }
}
