// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check, so nothing here may be called unconditionally.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace qnet::kernels::detail {
namespace {

// One __m256d holds two complex doubles laid out as [re0 im0 re1 im1].
inline __m256d load2(const Complex* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// Lane-wise complex product of two packed pairs.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline Complex hsum2(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

const __m256d kConjMask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);

}  // namespace

Complex avx2_dotu(const Complex* a, const Complex* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(load2(a + i), load2(b + i)));
    acc1 = _mm256_add_pd(acc1, cmul(load2(a + i + 2), load2(b + i + 2)));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul(load2(a + i), load2(b + i)));
  Complex s = hsum2(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

Complex avx2_dotc(const Complex* a, const Complex* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(_mm256_xor_pd(load2(a + i), kConjMask), load2(b + i)));
    acc1 = _mm256_add_pd(acc1, cmul(_mm256_xor_pd(load2(a + i + 2), kConjMask), load2(b + i + 2)));
  }
  for (; i + 2 <= n; i += 2)
    acc0 = _mm256_add_pd(acc0, cmul(_mm256_xor_pd(load2(a + i), kConjMask), load2(b + i)));
  Complex s = hsum2(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void avx2_axpy(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const __m256d av = _mm256_set_pd(alpha.imag(), alpha.real(), alpha.imag(), alpha.real());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(load2(x + i), av)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void avx2_scale(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const __m256d av = _mm256_set_pd(alpha.imag(), alpha.real(), alpha.imag(), alpha.real());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(y + i, cmul(load2(x + i), av));
  for (; i < n; ++i) y[i] = alpha * x[i];
}

double avx2_norm_sq(const Complex* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  const Complex c = hsum2(acc);
  double s = c.real() + c.imag();
  for (; i < n; ++i) s += std::norm(a[i]);
  return s;
}

}  // namespace qnet::kernels::detail
