#pragma once

#include <cstdint>
#include <random>

namespace qdesign {

using Rng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection, identical on every platform.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace qdesign
