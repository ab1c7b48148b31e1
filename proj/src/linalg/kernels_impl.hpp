#pragma once

#include "qnet/kernels.hpp"

namespace qnet::kernels::detail {

Complex scalar_dotu(const Complex* a, const Complex* b, std::size_t n);
Complex scalar_dotc(const Complex* a, const Complex* b, std::size_t n);
void scalar_axpy(Complex alpha, const Complex* x, Complex* y, std::size_t n);
void scalar_scale(Complex alpha, const Complex* x, Complex* y, std::size_t n);
double scalar_norm_sq(const Complex* a, std::size_t n);

#if defined(QNET_HAVE_AVX2_KERNELS)
Complex avx2_dotu(const Complex* a, const Complex* b, std::size_t n);
Complex avx2_dotc(const Complex* a, const Complex* b, std::size_t n);
void avx2_axpy(Complex alpha, const Complex* x, Complex* y, std::size_t n);
void avx2_scale(Complex alpha, const Complex* x, Complex* y, std::size_t n);
double avx2_norm_sq(const Complex* a, std::size_t n);
#endif

}  // namespace qnet::kernels::detail
