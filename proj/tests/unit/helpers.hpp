#pragma once

#include <cmath>
#include <complex>

#include "qnet/linalg.hpp"
#include "qnet/qstate.hpp"
#include "qnet/rng.hpp"

namespace qnet::test {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

inline Complex random_complex(RngStream& rng) { return {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0}; }

inline ComplexMatrix random_matrix(RngStream& rng, std::size_t r, std::size_t c) {
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_complex(rng);
  return m;
}

inline ComplexVector random_vector(RngStream& rng, std::size_t n) {
  ComplexVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = random_complex(rng);
  return v;
}

inline state::PureState random_pure(RngStream& rng, std::size_t n_qubits) {
  return state::PureState(random_vector(rng, std::size_t{1} << n_qubits).normalized());
}

/// Random mixed state: a convex mix of a few random pure states.
inline state::DensityMatrix random_density(RngStream& rng, std::size_t n_qubits) {
  std::vector<std::pair<double, state::PureState>> ens;
  double w[3] = {rng.uniform() + 1e-3, rng.uniform() + 1e-3, rng.uniform() + 1e-3};
  const double total = w[0] + w[1] + w[2];
  for (double x : w) ens.emplace_back(x / total, random_pure(rng, n_qubits));
  return state::DensityMatrix::mixture(ens);
}

inline bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace qnet::test
