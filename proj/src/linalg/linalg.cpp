#include "qnet/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "qnet/error.hpp"
#include "qnet/kernels.hpp"

namespace qnet::linalg {
namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::DimensionMismatch, std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                                           std::to_string(b.cols()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexVector

ComplexVector::ComplexVector(std::size_t size) : data_(size) {
  if (size == 0) fail(ErrorCode::InvalidSize, "vector length must be >= 1");
}

ComplexVector::ComplexVector(std::initializer_list<Complex> values) : data_(values) {
  if (data_.empty()) fail(ErrorCode::InvalidSize, "vector length must be >= 1");
}

ComplexVector::ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {
  if (data_.empty()) fail(ErrorCode::InvalidSize, "vector length must be >= 1");
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) fail(ErrorCode::DimensionMismatch, "basis index out of range");
  ComplexVector v(dim);
  v[index] = 1.0;
  return v;
}

double ComplexVector::norm_squared() const { return kernels::norm_sq(data_); }

double ComplexVector::norm() const { return std::sqrt(norm_squared()); }

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  if (n == 0.0) fail(ErrorCode::InvalidState, "cannot normalize the zero vector");
  ComplexVector out(size());
  kernels::scale(Complex{1.0 / n, 0.0}, data_, out.data_);
  return out;
}

bool ComplexVector::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  if (size() != other.size()) fail(ErrorCode::DimensionMismatch, "vector add");
  kernels::axpy(Complex{1.0, 0.0}, other.data_, data_);
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  if (size() != other.size()) fail(ErrorCode::DimensionMismatch, "vector subtract");
  kernels::axpy(Complex{-1.0, 0.0}, other.data_, data_);
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex s) {
  kernels::scale(s, data_, data_);
  return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(Complex s, ComplexVector v) { return v *= s; }

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) fail(ErrorCode::InvalidSize, "matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0) fail(ErrorCode::InvalidSize, "matrix dimensions must be positive");
  if (data_.size() != rows * cols) fail(ErrorCode::DimensionMismatch, "entries length != rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) fail(ErrorCode::InvalidSize, "matrix dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::DimensionMismatch, "ragged matrix rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix add");
  kernels::axpy(Complex{1.0, 0.0}, other.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix subtract");
  kernels::axpy(Complex{-1.0, 0.0}, other.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  kernels::scale(s, data_, data_);
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) { return matvec(m, v); }

// ---------------------------------------------------------------------------
// QubitIndexSet

QubitIndexSet::QubitIndexSet(std::initializer_list<std::size_t> indices) : QubitIndexSet(std::vector(indices)) {}

QubitIndexSet::QubitIndexSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  auto sorted = indices_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorCode::InvalidIndices, "qubit indices must be distinct");
}

void QubitIndexSet::validate(std::size_t n_qubits) const {
  for (auto q : indices_)
    if (q >= n_qubits)
      fail(ErrorCode::DimensionMismatch,
           "qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_qubits) + " qubits");
}

// ---------------------------------------------------------------------------
// Products

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  auto dst = out.span();
  for (std::size_t i = 0; i < a.size(); ++i) kernels::scale(a[i], b.span(), dst.subspan(i * b.size(), b.size()));
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < b.rows(); ++k) {
      auto dst = out.row(i * b.rows() + k);
      for (std::size_t j = 0; j < a.cols(); ++j) kernels::scale(a(i, j), b.row(k), dst.subspan(j * b.cols(), b.cols()));
    }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Complex inner_product(const ComplexVector& bra_of, const ComplexVector& ket) {
  if (bra_of.size() != ket.size()) fail(ErrorCode::DimensionMismatch, "inner product of unequal lengths");
  return kernels::dotc(bra_of.span(), ket.span());
}

ComplexMatrix outer_product(const ComplexVector& ket, const ComplexVector& bra_of) {
  ComplexMatrix out(ket.size(), bra_of.size());
  std::vector<Complex> conj_bra(bra_of.size());
  for (std::size_t j = 0; j < bra_of.size(); ++j) conj_bra[j] = std::conj(bra_of[j]);
  for (std::size_t i = 0; i < ket.size(); ++i) kernels::scale(ket[i], conj_bra, out.row(i));
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimensionMismatch, "matmul inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik != Complex{}) kernels::axpy(aik, b.row(k), dst);
    }
  }
  return out;
}

ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.cols() != v.size()) fail(ErrorCode::DimensionMismatch, "matvec dimensions differ");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = kernels::dotu(m.row(i), v.span());
  return out;
}

Complex trace(const ComplexMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::DimensionMismatch, "trace of a non-square matrix");
  Complex t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

std::size_t qubit_count(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0)
    fail(ErrorCode::DimensionMismatch, "dimension " + std::to_string(dim) + " is not a power of two");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

ComplexMatrix embed_gate(const ComplexMatrix& gate, const QubitIndexSet& on, std::size_t n_qubits) {
  on.validate(n_qubits);
  const std::size_t k = on.size();
  if (!gate.is_square() || gate.rows() != (std::size_t{1} << k))
    fail(ErrorCode::DimensionMismatch, "gate dimension must be 2^|targets|");
  const std::size_t dim = std::size_t{1} << n_qubits;

  std::size_t target_mask = 0;
  for (auto q : on) target_mask |= std::size_t{1} << (n_qubits - 1 - q);

  // Sub-index of a full basis index restricted to the targets, in target order.
  auto sub_index = [&](std::size_t full) {
    std::size_t s = 0;
    for (std::size_t t = 0; t < k; ++t) s = (s << 1) | ((full >> (n_qubits - 1 - on[t])) & 1U);
    return s;
  };

  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t rs = sub_index(r);
    const std::size_t rest = r & ~target_mask;
    // Enumerate columns that agree with r outside the targets.
    for (std::size_t cs = 0; cs < gate.cols(); ++cs) {
      std::size_t c = rest;
      for (std::size_t t = 0; t < k; ++t)
        if ((cs >> (k - 1 - t)) & 1U) c |= std::size_t{1} << (n_qubits - 1 - on[t]);
      out(r, c) = gate(rs, cs);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparisons

bool approx_equal(const ComplexVector& a, const ComplexVector& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

bool equal_up_to_global_phase(const ComplexVector& a, const ComplexVector& b, double tol) {
  if (a.size() != b.size()) return false;
  return std::abs(std::abs(inner_product(a, b)) - 1.0) <= tol;
}

bool equal_up_to_global_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  // Fix the phase on the largest entry of b.
  std::size_t best = 0;
  auto eb = b.entries();
  auto ea = a.entries();
  for (std::size_t i = 1; i < eb.size(); ++i)
    if (std::abs(eb[i]) > std::abs(eb[best])) best = i;
  if (std::abs(eb[best]) <= tol) return max_abs_diff(a, b) <= tol;
  const Complex ratio = ea[best] / eb[best];
  if (std::abs(std::abs(ratio) - 1.0) > tol) return false;
  for (std::size_t i = 0; i < eb.size(); ++i)
    if (std::abs(ea[i] - ratio * eb[i]) > tol) return false;
  return true;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  return approx_equal(matmul(m, adjoint(m)), ComplexMatrix::identity(m.rows()), tol);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = r; c < m.cols(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
  return worst;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::DimensionMismatch, "eigenvalues of a non-square matrix");
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd em(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      em(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace qnet::linalg
