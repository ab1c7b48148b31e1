#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qnet/error.hpp"

using namespace qnet;
using namespace qnet::state;
using linalg::Complex;

TEST_CASE("pure state validation") {
  CHECK_THROWS_AS(PureState(linalg::ComplexVector{1, 1}), Error);
  CHECK_THROWS_AS(PureState(linalg::ComplexVector{1, 0, 0}), Error);
  CHECK(PureState::basis(3, 5).n_qubits() == 3);
  CHECK(std::abs(PureState::basis(3, 5)[5] - Complex(1)) < 1e-15);
}

TEST_CASE("Hadamard and CNOT build PhiPlus") {
  auto psi = apply_gate(PureState::zero(2), gates::H(), {0});
  psi = apply_gate(psi, gates::CNOT(), {0, 1});
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(linalg::approx_equal(psi.vector(), linalg::ComplexVector{s, 0, 0, s}));
}

TEST_CASE("Bloch angles and coordinates") {
  const auto psi = PureState::from_bloch_angles(std::numbers::pi / 2, std::numbers::pi / 2);
  const auto b = bloch_coordinates(psi);
  CHECK(test::close(b.x, 0.0));
  CHECK(test::close(b.y, 1.0));
  CHECK(test::close(b.z, 0.0));
  CHECK(test::close(bloch_coordinates(DensityMatrix::maximally_mixed(1)).norm(), 0.0));
}

TEST_CASE("rotation gate") {
  // A pi rotation about X is -iX.
  const auto r = rotation_gate({1, 0, 0}, std::numbers::pi);
  CHECK(linalg::equal_up_to_global_phase(r, gates::X()));
  CHECK_THROWS_AS(rotation_gate({1, 1, 0}, 1.0), Error);
}

TEST_CASE("measurement probabilities, projection and expectation") {
  const auto plus = kets::plus();
  const auto [pp, pm] = outcome_probabilities(plus, ObservableBasis::pauli_z(0));
  CHECK(test::close(pp, 0.5));
  CHECK(test::close(pm, 0.5));
  CHECK(test::close(expectation(plus, ObservableBasis::pauli_x(0)), 1.0));
  CHECK(test::close(variance(plus, ObservableBasis::pauli_z(0)), 1.0));
  const auto rec = project(plus, ObservableBasis::pauli_z(0), -1);
  CHECK(test::close(rec.probability, 0.5));
  CHECK(test::close(fidelity(rec.post_state, kets::one()), 1.0));
  CHECK_THROWS_AS(project(kets::zero(), ObservableBasis::pauli_z(0), -1), Error);
}

TEST_CASE("sampled measurement frequencies follow the Born rule") {
  RngStream rng(31);
  const auto psi = PureState::from_bloch_angles(1.0, 0.3);
  const double p_plus = std::pow(std::cos(0.5), 2);
  int plus = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) plus += measure(psi, ObservableBasis::pauli_z(0), rng).outcome > 0;
  const double sigma = std::sqrt(p_plus * (1 - p_plus) / n);
  CHECK(std::abs(plus / double(n) - p_plus) < 4 * sigma);
}

TEST_CASE("density matrix validation and purity") {
  CHECK_THROWS_AS(DensityMatrix(linalg::ComplexMatrix{{1.5, 0}, {0, -0.5}}), Error);
  CHECK_THROWS_AS(DensityMatrix(linalg::ComplexMatrix{{0.5, 1}, {0, 0.5}}), Error);
  CHECK(test::close(purity(DensityMatrix::maximally_mixed(1)), 0.5));
  CHECK(test::close(purity(DensityMatrix::from_pure(kets::plus_i())), 1.0));
  const auto mix = DensityMatrix::mixture({{0.5, kets::zero()}, {0.5, kets::one()}});
  CHECK(linalg::approx_equal(mix.matrix(), DensityMatrix::maximally_mixed(1).matrix()));
}

TEST_CASE("pure and density paths agree for random circuits") {
  RngStream rng(32);
  for (int draw = 0; draw < 200; ++draw) {
    auto psi = test::random_pure(rng, 3);
    auto rho = DensityMatrix::from_pure(psi);
    const auto u = rotation_gate({0, 0.6, 0.8}, rng.uniform() * 6);
    psi = apply_gate(apply_gate(psi, u, {2}), gates::CNOT(), {2, 0});
    rho = apply_gate(apply_gate(rho, u, {2}), gates::CNOT(), {2, 0});
    REQUIRE(linalg::approx_equal(rho.matrix(), DensityMatrix::from_pure(psi).matrix(), 1e-12));
    const auto obs = ObservableBasis::pauli_y(1);
    REQUIRE(test::close(expectation(psi, obs), expectation(rho, obs), 1e-12));
  }
}

TEST_CASE("Mach-Zehnder interferometer") {
  // Photon entering the upper path exits at one detector; blocking the lower
  // path absorbs half and splits the rest evenly.
  const auto open = mach_zehnder(kets::zero(), false);
  CHECK(test::close(open.d0 + open.d1, 1.0));
  CHECK((test::close(open.d0, 1.0) || test::close(open.d1, 1.0)));
  const auto blocked = mach_zehnder(kets::zero(), true);
  CHECK(test::close(blocked.absorbed, 0.5));
  CHECK(test::close(blocked.d0, 0.25));
  CHECK(test::close(blocked.d1, 0.25));
}
