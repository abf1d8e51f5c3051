#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>

namespace driftgate {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named substream of a master seed.
/// (master, tag, index) fully determines the result.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) {
  return Rng(derive_seed(master, tag, index));
}

/// Uniform integer in [0, n), n > 0. Multiply-shift with rejection, so the
/// sequence is the same on every standard library.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t floor = -n % n;
    while (low < floor) {
      m = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Fisher-Yates over [first, last) driven by uniform_below.
template <class It>
void shuffle_range(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1),
                                                      first + static_cast<std::ptrdiff_t>(uniform_below(rng, i)));
}

/// 64-bit FNV-1a; stable across platforms.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace driftgate
