#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "vanet/bytes.hpp"

namespace vanet {

// Derives an independent stream seed from a master seed and a label.
// Used to give every randomized subsystem (mobility, jitter, phases, ...)
// its own generator so adding draws in one place never perturbs another.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = fnv1a(as_bytes(label));
  h = fnv1a_u64(master, h);
  h = fnv1a_u64(index, h);
  // splitmix64 finalizer for avalanche
  h += 0x9E3779B97F4A7C15ULL;
  h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
  h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
  return h ^ (h >> 31);
}

// Uniform draw in [0, n) using fixed-point multiply. std::mt19937_64 output
// is standardized; the distribution classes are not, so we avoid them.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) return 0;
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// Uniform draw in [lo, hi] inclusive.
inline std::int64_t bounded_range(std::mt19937_64& rng, std::int64_t lo,
                                  std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  bounded(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace vanet
