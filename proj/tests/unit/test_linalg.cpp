#include "doctest.h"
#include "helpers.hpp"
#include "qnet/error.hpp"

using namespace qnet;
using namespace qnet::linalg;

TEST_CASE("tensor, adjoint and trace identities over random draws") {
  RngStream rng(21);
  for (int draw = 0; draw < 1000; ++draw) {
    const auto a = test::random_matrix(rng, 2, 2);
    const auto b = test::random_matrix(rng, 2, 2);
    const auto c = test::random_matrix(rng, 2, 2);
    const auto d = test::random_matrix(rng, 2, 2);
    // (A (x) B)(C (x) D) = AC (x) BD
    REQUIRE(approx_equal(tensor(a, b) * tensor(c, d), tensor(a * c, b * d), 1e-12));
    // (AB)^dagger = B^dagger A^dagger
    REQUIRE(approx_equal(adjoint(a * b), adjoint(b) * adjoint(a), 1e-12));
    // tr(A (x) B) = tr A tr B, tr(AB) = tr(BA)
    REQUIRE(std::abs(trace(tensor(a, b)) - trace(a) * trace(b)) < 1e-12);
    REQUIRE(std::abs(trace(a * b) - trace(b * a)) < 1e-12);
    // (A (x) B)^dagger = A^dagger (x) B^dagger
    REQUIRE(approx_equal(adjoint(tensor(a, b)), tensor(adjoint(a), adjoint(b)), 1e-12));
    const auto u = test::random_vector(rng, 4);
    const auto v = test::random_vector(rng, 4);
    REQUIRE(std::abs(inner_product(u, v) - std::conj(inner_product(v, u))) < 1e-12);
  }
}

TEST_CASE("X on the first qubit of a two-qubit state") {
  // a|00> + b|01> + g|10> + d|11>  ->  a|10> + b|11> + g|00> + d|01>
  const Complex a{0.1, 0.2}, b{0.3, -0.1}, g{-0.5, 0.0}, d{0.2, 0.4};
  const ComplexVector psi{a, b, g, d};
  const ComplexMatrix x{{0, 1}, {1, 0}};
  const ComplexVector out = embed_gate(x, {0}, 2) * psi;
  CHECK(approx_equal(out, ComplexVector{g, d, a, b}));
}

TEST_CASE("qubit 0 is the most significant bit") {
  const ComplexMatrix x{{0, 1}, {1, 0}};
  const auto e = embed_gate(x, {1}, 2) * ComplexVector::basis(4, 0);
  CHECK(approx_equal(e, ComplexVector::basis(4, 1)));
}

TEST_CASE("embed_gate honours target order") {
  const ComplexMatrix cnot{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  // Control on qubit 1, target on qubit 0: |01> -> |11>.
  const auto out = embed_gate(cnot, {1, 0}, 2) * ComplexVector::basis(4, 1);
  CHECK(approx_equal(out, ComplexVector::basis(4, 3)));
}

TEST_CASE("predicates and errors") {
  const ComplexMatrix h = Complex(1.0 / std::sqrt(2.0)) * ComplexMatrix{{1, 1}, {1, -1}};
  CHECK(is_unitary(h));
  CHECK(is_hermitian(h));
  CHECK_FALSE(is_unitary(ComplexMatrix{{1, 1}, {0, 1}}));
  CHECK(qubit_count(8) == 3);
  CHECK_THROWS_AS(qubit_count(6), Error);
  CHECK_THROWS_AS(QubitIndexSet({0, 0}), Error);
  CHECK_THROWS_AS((ComplexMatrix(2, 3) * ComplexMatrix(2, 3)), Error);
  CHECK(equal_up_to_global_phase(ComplexVector{1, 0}, ComplexVector{Complex(0, 1), 0}));
}

TEST_CASE("hermitian eigenvalues") {
  const ComplexMatrix m{{2, Complex(0, 1)}, {Complex(0, -1), 2}};
  const auto ev = hermitian_eigenvalues(m);
  REQUIRE(ev.size() == 2);
  CHECK(test::close(ev[0], 1.0));
  CHECK(test::close(ev[1], 3.0));
}
