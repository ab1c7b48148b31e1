#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qnet/linalg.hpp"
#include "qnet/rng.hpp"

namespace qnet::state {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::QubitIndexSet;

namespace gates {
const ComplexMatrix& I();
const ComplexMatrix& X();
const ComplexMatrix& Y();
const ComplexMatrix& Z();
const ComplexMatrix& H();
const ComplexMatrix& S();
/// Control is the first listed target, target the second.
const ComplexMatrix& CNOT();
const ComplexMatrix& CZ();
/// First Mach-Zehnder beam splitter (equal to H).
const ComplexMatrix& BS1();
/// Second Mach-Zehnder beam splitter, (1/sqrt2)[[-1, 1], [1, 1]].
const ComplexMatrix& BS2();

/// Every fixed gate above, paired with its name.
std::vector<std::pair<std::string, ComplexMatrix>> table();
}  // namespace gates

/// exp(-i theta n.sigma / 2) = cos(theta/2) I - i sin(theta/2)(nx X + ny Y + nz Z).
/// Throws NonUnitVector unless |axis| = 1 within 1e-9.
ComplexMatrix rotation_gate(const std::array<double, 3>& axis, double theta);

class PureState {
 public:
  /// Throws InvalidState unless the vector has power-of-two length and unit norm.
  explicit PureState(ComplexVector amplitudes);

  static PureState basis(std::size_t n_qubits, std::size_t index);
  static PureState zero(std::size_t n_qubits) { return basis(n_qubits, 0); }
  /// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
  static PureState from_bloch_angles(double theta, double phi);

  const ComplexVector& vector() const noexcept { return vec_; }
  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return vec_.size(); }
  const Complex& operator[](std::size_t i) const noexcept { return vec_[i]; }

 private:
  ComplexVector vec_;
  std::size_t n_qubits_;
};

namespace kets {
PureState zero();
PureState one();
PureState plus();
PureState minus();
PureState plus_i();
PureState minus_i();
}  // namespace kets

class DensityMatrix {
 public:
  /// Validates Hermitian, unit trace and eigenvalues >= -1e-9; throws InvalidState.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t n_qubits);
  /// sum_i p_i |psi_i><psi_i|; weights must be non-negative and sum to 1.
  static DensityMatrix mixture(const std::vector<std::pair<double, PureState>>& ensemble);
  /// Skips the eigenvalue check; for results of trace-preserving maps computed
  /// internally. Hermiticity and trace are still checked.
  static DensityMatrix trusted(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return mat_.rows(); }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return mat_(r, c); }

  /// Hermitian, unit trace and PSD within `tol`.
  static bool is_valid(const ComplexMatrix& m, double tol = linalg::kTolerance);

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked);

  ComplexMatrix mat_;
  std::size_t n_qubits_;
};

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// A +-1 valued observable on `targets`. `obs` is 2^|targets| square, Hermitian,
/// and squares to the identity, so the projectors are (I +- obs)/2.
class ObservableBasis {
 public:
  ObservableBasis(ComplexMatrix obs, QubitIndexSet targets, std::string label);

  static ObservableBasis pauli_x(std::size_t qubit);
  static ObservableBasis pauli_y(std::size_t qubit);
  static ObservableBasis pauli_z(std::size_t qubit);
  /// nx X + ny Y + nz Z on one qubit; the axis must be a unit vector.
  static ObservableBasis axis(std::size_t qubit, const std::array<double, 3>& n, std::string label);
  /// Same observable moved to another qubit.
  ObservableBasis on(std::size_t qubit) const;

  const ComplexMatrix& obs() const noexcept { return obs_; }
  const QubitIndexSet& targets() const noexcept { return targets_; }
  const std::string& label() const noexcept { return label_; }

  /// Projector for outcome +1 (sign > 0) or -1, embedded into n_qubits.
  ComplexMatrix projector(int sign, std::size_t n_qubits) const;

 private:
  ComplexMatrix obs_;
  QubitIndexSet targets_;
  std::string label_;
};

template <class State>
struct MeasurementRecord {
  int outcome;         // +1 or -1
  double probability;  // probability of the sampled outcome
  State post_state;
};

/// Throws NonUnitary / DimensionMismatch.
PureState apply_gate(const PureState& psi, const ComplexMatrix& gate, const QubitIndexSet& targets);
DensityMatrix apply_gate(const DensityMatrix& rho, const ComplexMatrix& gate, const QubitIndexSet& targets);

/// (Prob{+1}, Prob{-1}).
std::pair<double, double> outcome_probabilities(const PureState& psi, const ObservableBasis& basis);
std::pair<double, double> outcome_probabilities(const DensityMatrix& rho, const ObservableBasis& basis);

MeasurementRecord<PureState> measure(const PureState& psi, const ObservableBasis& basis, RngStream& rng);
MeasurementRecord<DensityMatrix> measure(const DensityMatrix& rho, const ObservableBasis& basis, RngStream& rng);

/// Post-measurement state for a chosen outcome; throws ZeroProbabilityBranch if
/// that outcome has probability < 1e-12.
MeasurementRecord<PureState> project(const PureState& psi, const ObservableBasis& basis, int outcome);
MeasurementRecord<DensityMatrix> project(const DensityMatrix& rho, const ObservableBasis& basis, int outcome);

double expectation(const PureState& psi, const ObservableBasis& basis);
double expectation(const DensityMatrix& rho, const ObservableBasis& basis);
/// Real part of tr(rho * op) for an arbitrary operator given on the full space.
double expectation(const DensityMatrix& rho, const ComplexMatrix& full_operator);
double variance(const PureState& psi, const ObservableBasis& basis);
double variance(const DensityMatrix& rho, const ObservableBasis& basis);

double purity(const DensityMatrix& rho);

/// <psi|rho|psi>
double fidelity(const DensityMatrix& rho, const PureState& target);
/// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);

struct BlochVector {
  double x, y, z;
  double norm() const;
};
BlochVector bloch_coordinates(const PureState& psi);
BlochVector bloch_coordinates(const DensityMatrix& rho);

struct MachZehnderOutcome {
  double d0;
  double d1;
  double absorbed;
};

/// Single-photon Mach-Zehnder interferometer on a path-encoded qubit
/// (|0> upper path, |1> lower path). Unblocked: BS2 * BS1 and |amplitude|^2 per
/// detector. Blocked: the lower-path component is absorbed after BS1.
MachZehnderOutcome mach_zehnder(const PureState& input, bool block_lower);

}  // namespace qnet::state
