#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qnet/entangled.hpp"
#include "qnet/error.hpp"

using namespace qnet;
using namespace qnet::entangled;
using state::DensityMatrix;
using state::PureState;

TEST_CASE("Bell states") {
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(linalg::approx_equal(bell_state(BellLabel::PhiPlus).vector(), linalg::ComplexVector{s, 0, 0, s}));
  CHECK(linalg::approx_equal(bell_state(BellLabel::PhiMinus).vector(), linalg::ComplexVector{s, 0, 0, -s}));
  CHECK(linalg::approx_equal(bell_state(BellLabel::PsiPlus).vector(), linalg::ComplexVector{0, s, s, 0}));
  CHECK(linalg::approx_equal(bell_state(BellLabel::PsiMinus).vector(), linalg::ComplexVector{0, s, -s, 0}));
  CHECK(parse_bell_label("phi+") == BellLabel::PhiPlus);
  CHECK(parse_bell_label("PsiMinus") == BellLabel::PsiMinus);
  CHECK_THROWS_AS(parse_bell_label("chi"), Error);
}

TEST_CASE("Bell decomposition is a change of basis") {
  RngStream rng(51);
  for (int draw = 0; draw < 100; ++draw) {
    const auto psi = test::random_pure(rng, 2);
    const auto c = bell_decompose(psi);
    linalg::ComplexVector rebuilt(4);
    for (std::size_t k = 0; k < 4; ++k) rebuilt += c[k] * bell_state(kBellLabels[k]).vector();
    REQUIRE(linalg::approx_equal(rebuilt, psi.vector(), 1e-12));
  }
}

TEST_CASE("GHZ, W and graph states") {
  const auto g = ghz(3);
  CHECK(test::close(std::norm(g[0]), 0.5));
  CHECK(test::close(std::norm(g[7]), 0.5));
  const auto w = w_state(3);
  for (std::size_t i : {1u, 2u, 4u}) CHECK(test::close(std::norm(w[i]), 1.0 / 3.0));
  CHECK_THROWS_AS(ghz(1), Error);
  // The two-vertex graph state is locally equivalent to a Bell pair: its
  // reduced states are maximally mixed.
  const auto gs = graph_state({2, {{0, 1}}});
  const auto red = partial_trace(DensityMatrix::from_pure(gs), {0});
  CHECK(test::close(state::purity(red), 0.5));
  CHECK(test::close(gs[3].real(), -0.5));
  CHECK_THROWS_AS(graph_state({2, {{0, 0}}}), Error);
  CHECK_THROWS_AS(graph_state({2, {{0, 1}, {1, 0}}}), Error);
  CHECK_THROWS_AS(graph_state({2, {{0, 2}}}), Error);
}

TEST_CASE("partial trace keeps the listed order") {
  const auto psi = state::tensor(state::tensor(state::kets::zero(), state::kets::one()), state::kets::plus());
  const auto rho = DensityMatrix::from_pure(psi);
  CHECK(test::close(state::fidelity(partial_trace(rho, {1}), state::kets::one()), 1.0));
  const auto swapped = partial_trace(rho, {2, 0});
  CHECK(test::close(state::fidelity(swapped, state::tensor(state::kets::plus(), state::kets::zero())), 1.0));
}

TEST_CASE("CHSH presets reach 2 sqrt 2 on their Bell states") {
  const double tsirelson = 2.0 * std::numbers::sqrt2;
  CHECK(test::close(chsh_value(bell_state(BellLabel::PsiPlus), ChshSetting::psi_plus()), tsirelson));
  CHECK(test::close(chsh_value(bell_state(BellLabel::PhiPlus), ChshSetting::phi_plus()), tsirelson));
  CHECK(test::close(chsh_value(bell_state(BellLabel::PhiMinus), ChshSetting::phi_minus()), tsirelson));
  CHECK(test::close(chsh_value(bell_state(BellLabel::PsiMinus), ChshSetting::psi_minus()), tsirelson));
  // A product state never violates the inequality.
  const auto prod = state::tensor(state::kets::zero(), state::kets::plus());
  CHECK(chsh_value(prod, ChshSetting::psi_plus()) <= 2.0 + 1e-12);
  CHECK_THROWS_AS(ChshSetting::preset("nope"), Error);
}

TEST_CASE("CHSH from a probability table") {
  const std::array<int, 4> signs{1, 1, 1, -1};
  // Literal rows: the last correlator comes out -0.64, giving 1.44.
  ChshCounts literal{{{0.04, 0.26, 0.60, 0.10},
                      {0.04, 0.26, 0.60, 0.10},
                      {0.16, 0.34, 0.48, 0.02},
                      {0.16, 0.34, 0.48, 0.02}}};
  CHECK(test::close(chsh_from_counts(literal, signs), 1.44, 1e-12));
  // With the last row's labels mirrored its correlator is +0.64 and S = 2.72.
  ChshCounts fixed = literal;
  fixed[3] = {0.48, 0.02, 0.16, 0.34};
  CHECK(test::close(chsh_from_counts(fixed, signs), 2.72, 1e-6));
  CHECK(test::close(correlator_from_row({10, 0, 0, 30}), 1.0));
  CHECK_THROWS_AS(correlator_from_row({0, 0, 0, 0}), Error);
}

TEST_CASE("sampled CHSH converges") {
  RngStream rng(52);
  const auto s = ChshSetting::psi_plus();
  const auto counts = sample_chsh_counts(bell_density(BellLabel::PsiPlus), s, 100000, rng);
  CHECK(std::abs(chsh_from_counts(counts, s.signs) - 2.0 * std::numbers::sqrt2) < 0.05);
  double total = 0.0;
  for (const auto& row : counts)
    for (double c : row) total += c;
  CHECK(total == 100000.0);
}

TEST_CASE("monogamy check") {
  const auto bell_and_zero = state::tensor(bell_state(BellLabel::PhiPlus), state::kets::zero());
  const auto rep = monogamy_check(bell_and_zero);
  CHECK(rep.consistent);
  CHECK(test::close(rep.pairs[0].max_fidelity, 1.0));
  CHECK(test::close(rep.single_purities[2], 1.0));
  const auto g = monogamy_check(ghz(3));
  CHECK(g.consistent);
  for (const auto& p : g.pairs) CHECK(test::close(p.max_fidelity, 0.5));
  CHECK(g.pairs[0].nearest.size() == 2);
}
