#include <algorithm>
#include <cmath>
#include <string>

#include "qnet/error.hpp"
#include "qnet/qstate.hpp"

namespace qnet::state {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr double kBranchFloor = 1e-12;

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

void require_dims(std::size_t n_state, const QubitIndexSet& targets) { targets.validate(n_state); }

// Hermitian part of a matrix that should be Hermitian up to rounding.
ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector amplitudes) : vec_(std::move(amplitudes)), n_qubits_(0) {
  if (vec_.size() < 2 || (vec_.size() & (vec_.size() - 1)) != 0)
    fail(ErrorCode::InvalidState, "pure state length must be a power of two >= 2");
  if (!vec_.is_normalized())
    fail(ErrorCode::InvalidState, "pure state is not normalized (norm^2 = " + std::to_string(vec_.norm_squared()) + ")");
  n_qubits_ = linalg::qubit_count(vec_.size());
}

PureState PureState::basis(std::size_t n_qubits, std::size_t index) {
  return PureState(ComplexVector::basis(std::size_t{1} << n_qubits, index));
}

PureState PureState::from_bloch_angles(double theta, double phi) {
  return PureState(ComplexVector{std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
}

namespace kets {
PureState zero() { return PureState(ComplexVector{1, 0}); }
PureState one() { return PureState(ComplexVector{0, 1}); }
PureState plus() { return PureState(ComplexVector{kInvSqrt2, kInvSqrt2}); }
PureState minus() { return PureState(ComplexVector{kInvSqrt2, -kInvSqrt2}); }
PureState plus_i() { return PureState(ComplexVector{kInvSqrt2, Complex{0, kInvSqrt2}}); }
PureState minus_i() { return PureState(ComplexVector{kInvSqrt2, Complex{0, -kInvSqrt2}}); }
}  // namespace kets

PureState tensor(const PureState& a, const PureState& b) { return PureState(linalg::tensor(a.vector(), b.vector())); }

// ---------------------------------------------------------------------------
// DensityMatrix

bool DensityMatrix::is_valid(const ComplexMatrix& m, double tol) {
  if (!m.is_square() || m.rows() < 2 || (m.rows() & (m.rows() - 1)) != 0) return false;
  if (!linalg::is_hermitian(m, tol)) return false;
  const Complex tr = linalg::trace(m);
  if (std::abs(tr.real() - 1.0) > tol || std::abs(tr.imag()) > tol) return false;
  const auto ev = linalg::hermitian_eigenvalues(m);
  return ev.front() >= -tol;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : mat_(std::move(m)), n_qubits_(0) {
  if (!is_valid(mat_)) fail(ErrorCode::InvalidState, "matrix is not a valid density matrix");
  n_qubits_ = linalg::qubit_count(mat_.rows());
}

DensityMatrix::DensityMatrix(ComplexMatrix m, Unchecked) : mat_(std::move(m)), n_qubits_(0) {
  if (!mat_.is_square()) fail(ErrorCode::InvalidState, "density matrix must be square");
  n_qubits_ = linalg::qubit_count(mat_.rows());
  if (!linalg::is_hermitian(mat_, 1e-8)) fail(ErrorCode::InvalidState, "density matrix is not Hermitian");
  mat_ = hermitize(mat_);
  const Complex tr = linalg::trace(mat_);
  if (std::abs(tr.real() - 1.0) > 1e-8) fail(ErrorCode::InvalidState, "density matrix trace != 1");
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix m) { return DensityMatrix(std::move(m), Unchecked{}); }

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(linalg::outer_product(psi.vector(), psi.vector()), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m *= Complex{1.0 / static_cast<double>(dim)};
  return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::mixture(const std::vector<std::pair<double, PureState>>& ensemble) {
  if (ensemble.empty()) fail(ErrorCode::InvalidState, "empty ensemble");
  const std::size_t dim = ensemble.front().second.dim();
  ComplexMatrix m(dim, dim);
  double total = 0.0;
  for (const auto& [p, psi] : ensemble) {
    if (p < 0.0) fail(ErrorCode::InvalidProbability, "negative mixture weight");
    if (psi.dim() != dim) fail(ErrorCode::DimensionMismatch, "ensemble members differ in dimension");
    m += Complex{p} * linalg::outer_product(psi.vector(), psi.vector());
    total += p;
  }
  if (std::abs(total - 1.0) > linalg::kTolerance) fail(ErrorCode::InvalidProbability, "mixture weights must sum to 1");
  return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::trusted(linalg::tensor(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------
// ObservableBasis

ObservableBasis::ObservableBasis(ComplexMatrix obs, QubitIndexSet targets, std::string label)
    : obs_(std::move(obs)), targets_(std::move(targets)), label_(std::move(label)) {
  if (!obs_.is_square() || obs_.rows() != (std::size_t{1} << targets_.size()))
    fail(ErrorCode::DimensionMismatch, "observable dimension must be 2^|targets|");
  if (!linalg::is_hermitian(obs_)) fail(ErrorCode::InvalidState, "observable " + label_ + " is not Hermitian");
  if (!linalg::approx_equal(obs_ * obs_, ComplexMatrix::identity(obs_.rows())))
    fail(ErrorCode::InvalidState, "observable " + label_ + " does not square to the identity");
}

ObservableBasis ObservableBasis::pauli_x(std::size_t qubit) { return {gates::X(), {qubit}, "X"}; }
ObservableBasis ObservableBasis::pauli_y(std::size_t qubit) { return {gates::Y(), {qubit}, "Y"}; }
ObservableBasis ObservableBasis::pauli_z(std::size_t qubit) { return {gates::Z(), {qubit}, "Z"}; }

ObservableBasis ObservableBasis::axis(std::size_t qubit, const std::array<double, 3>& n, std::string label) {
  const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (std::abs(len - 1.0) > linalg::kTolerance) fail(ErrorCode::NonUnitVector, "observable axis must be a unit vector");
  ComplexMatrix m = Complex{n[0]} * gates::X();
  m += Complex{n[1]} * gates::Y();
  m += Complex{n[2]} * gates::Z();
  return {std::move(m), {qubit}, std::move(label)};
}

ObservableBasis ObservableBasis::on(std::size_t qubit) const {
  if (targets_.size() != 1) fail(ErrorCode::DimensionMismatch, "only single-qubit observables can be moved");
  return {obs_, {qubit}, label_};
}

ComplexMatrix ObservableBasis::projector(int sign, std::size_t n_qubits) const {
  ComplexMatrix p = ComplexMatrix::identity(obs_.rows());
  if (sign > 0)
    p += obs_;
  else
    p -= obs_;
  p *= Complex{0.5};
  return linalg::embed_gate(p, targets_, n_qubits);
}

// ---------------------------------------------------------------------------
// Gates

PureState apply_gate(const PureState& psi, const ComplexMatrix& gate, const QubitIndexSet& targets) {
  require_dims(psi.n_qubits(), targets);
  if (!linalg::is_unitary(gate)) fail(ErrorCode::NonUnitary, "gate is not unitary");
  const ComplexMatrix full = linalg::embed_gate(gate, targets, psi.n_qubits());
  return PureState(linalg::matvec(full, psi.vector()).normalized());
}

DensityMatrix apply_gate(const DensityMatrix& rho, const ComplexMatrix& gate, const QubitIndexSet& targets) {
  require_dims(rho.n_qubits(), targets);
  if (!linalg::is_unitary(gate)) fail(ErrorCode::NonUnitary, "gate is not unitary");
  const ComplexMatrix full = linalg::embed_gate(gate, targets, rho.n_qubits());
  return DensityMatrix::trusted(full * rho.matrix() * linalg::adjoint(full));
}

// ---------------------------------------------------------------------------
// Measurement

std::pair<double, double> outcome_probabilities(const PureState& psi, const ObservableBasis& basis) {
  require_dims(psi.n_qubits(), basis.targets());
  const ComplexVector projected = linalg::matvec(basis.projector(+1, psi.n_qubits()), psi.vector());
  const double p_plus = clamp_probability(projected.norm_squared());
  return {p_plus, 1.0 - p_plus};
}

std::pair<double, double> outcome_probabilities(const DensityMatrix& rho, const ObservableBasis& basis) {
  require_dims(rho.n_qubits(), basis.targets());
  const double p_plus = clamp_probability(linalg::trace(basis.projector(+1, rho.n_qubits()) * rho.matrix()).real());
  return {p_plus, 1.0 - p_plus};
}

MeasurementRecord<PureState> project(const PureState& psi, const ObservableBasis& basis, int outcome) {
  require_dims(psi.n_qubits(), basis.targets());
  ComplexVector projected = linalg::matvec(basis.projector(outcome, psi.n_qubits()), psi.vector());
  const double p = projected.norm_squared();
  if (p < kBranchFloor) fail(ErrorCode::ZeroProbabilityBranch, "outcome has zero probability");
  return {outcome > 0 ? 1 : -1, clamp_probability(p), PureState(projected.normalized())};
}

MeasurementRecord<DensityMatrix> project(const DensityMatrix& rho, const ObservableBasis& basis, int outcome) {
  require_dims(rho.n_qubits(), basis.targets());
  const ComplexMatrix proj = basis.projector(outcome, rho.n_qubits());
  ComplexMatrix post = proj * rho.matrix() * proj;
  const double p = linalg::trace(post).real();
  if (p < kBranchFloor) fail(ErrorCode::ZeroProbabilityBranch, "outcome has zero probability");
  post *= Complex{1.0 / p};
  return {outcome > 0 ? 1 : -1, clamp_probability(p), DensityMatrix::trusted(std::move(post))};
}

MeasurementRecord<PureState> measure(const PureState& psi, const ObservableBasis& basis, RngStream& rng) {
  const auto [p_plus, p_minus] = outcome_probabilities(psi, basis);
  return project(psi, basis, rng.uniform() < p_plus ? +1 : -1);
}

MeasurementRecord<DensityMatrix> measure(const DensityMatrix& rho, const ObservableBasis& basis, RngStream& rng) {
  const auto [p_plus, p_minus] = outcome_probabilities(rho, basis);
  return project(rho, basis, rng.uniform() < p_plus ? +1 : -1);
}

// ---------------------------------------------------------------------------
// Scalars

double expectation(const PureState& psi, const ObservableBasis& basis) {
  require_dims(psi.n_qubits(), basis.targets());
  const ComplexMatrix full = linalg::embed_gate(basis.obs(), basis.targets(), psi.n_qubits());
  return linalg::inner_product(psi.vector(), linalg::matvec(full, psi.vector())).real();
}

double expectation(const DensityMatrix& rho, const ObservableBasis& basis) {
  require_dims(rho.n_qubits(), basis.targets());
  return expectation(rho, linalg::embed_gate(basis.obs(), basis.targets(), rho.n_qubits()));
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& full_operator) {
  if (full_operator.rows() != rho.dim() || full_operator.cols() != rho.dim())
    fail(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
  // tr(A rho) = sum_ij A_ij rho_ji
  Complex t{};
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j) t += full_operator(i, j) * rho(j, i);
  return t.real();
}

double variance(const PureState& psi, const ObservableBasis& basis) {
  const double e = expectation(psi, basis);
  return std::max(0.0, 1.0 - e * e);
}

double variance(const DensityMatrix& rho, const ObservableBasis& basis) {
  const double e = expectation(rho, basis);
  return std::max(0.0, 1.0 - e * e);
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  double s = 0.0;
  for (const auto& v : rho.matrix().entries()) s += std::norm(v);
  return s;
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  if (rho.dim() != target.dim()) fail(ErrorCode::DimensionMismatch, "fidelity: state dimensions differ");
  const double f = linalg::inner_product(target.vector(), linalg::matvec(rho.matrix(), target.vector())).real();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "fidelity: state dimensions differ");
  return std::clamp(std::norm(linalg::inner_product(a.vector(), b.vector())), 0.0, 1.0);
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector bloch_coordinates(const PureState& psi) {
  if (psi.n_qubits() != 1) fail(ErrorCode::DimensionMismatch, "Bloch coordinates need a single qubit");
  return bloch_coordinates(DensityMatrix::from_pure(psi));
}

BlochVector bloch_coordinates(const DensityMatrix& rho) {
  if (rho.n_qubits() != 1) fail(ErrorCode::DimensionMismatch, "Bloch coordinates need a single qubit");
  return {expectation(rho, gates::X()), expectation(rho, gates::Y()), expectation(rho, gates::Z())};
}

MachZehnderOutcome mach_zehnder(const PureState& input, bool block_lower) {
  if (input.n_qubits() != 1) fail(ErrorCode::DimensionMismatch, "Mach-Zehnder input is a single qubit");
  ComplexVector inside = linalg::matvec(gates::BS1(), input.vector());
  double absorbed = 0.0;
  if (block_lower) {
    absorbed = std::norm(inside[1]);
    inside[1] = 0.0;
  }
  const ComplexVector out = linalg::matvec(gates::BS2(), inside);
  return {std::norm(out[0]), std::norm(out[1]), absorbed};
}

}  // namespace qnet::state
