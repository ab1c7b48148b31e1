#pragma once

// Dense complex vectors and matrices.
//
// Qubit ordering: qubit 0 is the most significant bit of a basis-state index,
// so |q0 q1 ... q_{n-1}> has index q0*2^{n-1} + ... + q_{n-1}. With this
// convention |0> (x) |1> is index 1 of a 4-vector.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qnet::linalg {

using Complex = std::complex<double>;

inline constexpr double kTolerance = 1e-9;
inline constexpr double kStrictTolerance = 1e-12;

class ComplexVector {
 public:
  ComplexVector() : data_(1, Complex{1.0, 0.0}) {}
  explicit ComplexVector(std::size_t size);
  ComplexVector(std::initializer_list<Complex> values);
  explicit ComplexVector(std::vector<Complex> values);

  /// Computational basis vector e_index of the given dimension.
  static ComplexVector basis(std::size_t dim, std::size_t index);

  std::size_t size() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) noexcept { return data_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<Complex> span() noexcept { return data_; }
  std::span<const Complex> span() const noexcept { return data_; }
  const std::vector<Complex>& values() const noexcept { return data_; }

  double norm_squared() const;
  double norm() const;
  ComplexVector normalized() const;
  bool is_normalized(double tol = kTolerance) const;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(Complex s);

 private:
  std::vector<Complex> data_;
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(Complex s, ComplexVector v);

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major);
  /// Row-list construction, e.g. ComplexMatrix{{1, 0}, {0, -1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);

/// Ordered, distinct qubit indices a gate or measurement acts on.
class QubitIndexSet {
 public:
  QubitIndexSet() = default;
  QubitIndexSet(std::initializer_list<std::size_t> indices);
  explicit QubitIndexSet(std::vector<std::size_t> indices);

  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t operator[](std::size_t i) const noexcept { return indices_[i]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  /// Throws DimensionMismatch if any index is >= n_qubits.
  void validate(std::size_t n_qubits) const;

 private:
  std::vector<std::size_t> indices_;
};

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);

/// <bra_of | ket>; the first argument is conjugated.
Complex inner_product(const ComplexVector& bra_of, const ComplexVector& ket);

/// |ket><bra_of|
ComplexMatrix outer_product(const ComplexVector& ket, const ComplexVector& bra_of);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v);
Complex trace(const ComplexMatrix& m);

/// The 2^n x 2^n operator acting as `gate` on `on` (in the listed order) and as
/// identity on every other qubit.
ComplexMatrix embed_gate(const ComplexMatrix& gate, const QubitIndexSet& on, std::size_t n_qubits);

/// Number of qubits for a power-of-two dimension; throws DimensionMismatch otherwise.
std::size_t qubit_count(std::size_t dim);

bool approx_equal(const ComplexVector& a, const ComplexVector& b, double tol = kTolerance);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kTolerance);

/// |<a|b>| = 1 test for normalized vectors.
bool equal_up_to_global_phase(const ComplexVector& a, const ComplexVector& b, double tol = kTolerance);
/// a = e^{i phi} b for some phase phi, entrywise.
bool equal_up_to_global_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kTolerance);

bool is_unitary(const ComplexMatrix& m, double tol = kTolerance);
bool is_hermitian(const ComplexMatrix& m, double tol = kTolerance);

/// Largest absolute entry difference; matrices must have equal shape.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace qnet::linalg
