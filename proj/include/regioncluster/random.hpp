#pragma once

// Portable sampling on top of std::mt19937_64. The engine's output sequence
// is fixed by the C++ standard, but the std distributions are not, so the
// few draws the library needs are done here.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace regioncluster {

using Rng = std::mt19937_64;

// Uniform integer in [0, bound), bound > 0, by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T>
void shuffle(Rng& rng, std::span<T> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace regioncluster
