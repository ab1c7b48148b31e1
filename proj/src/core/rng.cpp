#include "qnet/rng.hpp"

#include <cmath>
#include <limits>

namespace qnet {

std::uint64_t RngStream::below(std::uint64_t n) {
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t RngStream::geometric(double p) {
  if (p >= 1.0) return 1;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  // Inversion: P(K > k) = (1-p)^k.
  const double u = 1.0 - uniform();  // (0, 1]
  const double k = std::ceil(std::log(u) / std::log1p(-p));
  if (!(k < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

}  // namespace qnet
