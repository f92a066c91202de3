#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace wpn {

// Seeded randomness helpers. The std:: distributions are implementation
// defined, so everything here draws raw words from mt19937_64 and maps them
// explicitly; a given seed replays the same sequence on any platform.

inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1), 53 bits
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(gen);
}

// Modulo bias is negligible for the small ranges used here.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  return gen() % n;
}

inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
  return lo + static_cast<int>(uniform_below(
                  gen, static_cast<std::uint64_t>(hi - lo) + 1));
}

inline bool bernoulli(std::mt19937_64& gen, double p) {
  return uniform_unit(gen) < p;
}

inline std::vector<int> random_permutation(std::mt19937_64& gen, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(uniform_below(gen, static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace wpn
