#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace qnet::kernels {
namespace {

constexpr KernelTable kScalar{"scalar", detail::scalar_dotu, detail::scalar_dotc, detail::scalar_axpy,
                              detail::scalar_scale, detail::scalar_norm_sq};

#if defined(QNET_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2{"avx2", detail::avx2_dotu, detail::avx2_dotc, detail::avx2_axpy, detail::avx2_scale,
                            detail::avx2_norm_sq};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* initial_table() noexcept {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("QNET_SIMD")) {
    if (std::string_view(env) == "scalar") return &kScalar;
  }
  return best != nullptr ? best : &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(QNET_HAVE_AVX2_KERNELS)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) noexcept {
  if (name == "scalar") {
    current().store(&kScalar);
    return true;
  }
  if (name == "avx2" && avx2_table() != nullptr) {
    current().store(avx2_table());
    return true;
  }
  return false;
}

}  // namespace qnet::kernels
