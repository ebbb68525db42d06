#pragma once

#include <cstdint>
#include <random>

namespace moseg {

/// splitmix64 step; used to derive independent child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic child seed for a tagged substream (per read, per edge, per cell...).
/// Different tag tuples give statistically independent streams for the same master.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0, std::uint64_t tag_c = 0) {
  std::uint64_t h = splitmix64(master ^ 0x7c0f1d4b9a3eULL);
  h = splitmix64(h ^ tag_a);
  h = splitmix64(h ^ tag_b);
  h = splitmix64(h ^ tag_c);
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace moseg
