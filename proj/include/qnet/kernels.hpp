#pragma once

// Inner-loop kernels for dense complex arithmetic.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into a separate translation unit and selected at runtime
// when the CPU supports it. The environment variable QNET_SIMD=scalar|avx2
// forces a choice (an unsupported request falls back to scalar).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qnet::kernels {

using Complex = std::complex<double>;

struct KernelTable {
  const char* name;
  // sum_i a[i] * b[i]
  Complex (*dotu)(const Complex* a, const Complex* b, std::size_t n);
  // sum_i conj(a[i]) * b[i]
  Complex (*dotc)(const Complex* a, const Complex* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
  // y[i] = alpha * x[i]
  void (*scale)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
  // sum_i |a[i]|^2
  double (*norm_sq)(const Complex* a, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

const KernelTable& active() noexcept;

/// Select a table by name ("scalar" or "avx2"); returns false if unavailable.
bool select(std::string_view name) noexcept;

inline Complex dotu(std::span<const Complex> a, std::span<const Complex> b) {
  return active().dotu(a.data(), b.data(), a.size());
}
inline Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  return active().dotc(a.data(), b.data(), a.size());
}
inline void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  active().scale(alpha, x.data(), y.data(), x.size());
}
inline double norm_sq(std::span<const Complex> a) { return active().norm_sq(a.data(), a.size()); }

}  // namespace qnet::kernels
