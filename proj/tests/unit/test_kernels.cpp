#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qnet/kernels.hpp"

using namespace qnet;
using kernels::Complex;

namespace {

std::vector<Complex> sample_values(RngStream& rng, std::size_t n) {
  std::vector<Complex> v(n);
  for (auto& x : v) x = test::random_complex(rng);
  return v;
}

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar table is always available and selectable") {
  CHECK(std::string(kernels::scalar_table().name) == "scalar");
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select("sse9"));
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  const kernels::KernelTable* avx = kernels::avx2_table();
  if (!avx) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& sc = kernels::scalar_table();
  RngStream rng(11);
  // Lengths cover empty input, every remainder mod 4 and long vectors.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 64u, 65u, 1000u, 4099u}) {
    CAPTURE(n);
    const auto a = sample_values(rng, n);
    const auto b = sample_values(rng, n);
    CHECK(rel_err(avx->dotu(a.data(), b.data(), n), sc.dotu(a.data(), b.data(), n)) < 1e-12);
    CHECK(rel_err(avx->dotc(a.data(), b.data(), n), sc.dotc(a.data(), b.data(), n)) < 1e-12);
    CHECK(test::close(avx->norm_sq(a.data(), n), sc.norm_sq(a.data(), n), 1e-12 * std::max<double>(1.0, n)));
    const Complex alpha{0.3, -1.7};
    auto y1 = b, y2 = b;
    sc.axpy(alpha, a.data(), y1.data(), n);
    avx->axpy(alpha, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
    sc.scale(alpha, a.data(), y1.data(), n);
    avx->scale(alpha, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
  }
}

TEST_CASE("linalg results do not depend on the selected kernel") {
  RngStream rng(12);
  const auto a = test::random_matrix(rng, 16, 16);
  const auto b = test::random_matrix(rng, 16, 16);
  REQUIRE(kernels::select("scalar"));
  const auto ref = linalg::matmul(a, b);
  if (kernels::select("avx2")) CHECK(linalg::max_abs_diff(linalg::matmul(a, b), ref) < 1e-12);
  kernels::select("scalar");
}
