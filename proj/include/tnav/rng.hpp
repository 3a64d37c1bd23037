#pragma once

#include <cstdint>
#include <random>

namespace tnav {

using Rng = std::mt19937_64;

// splitmix64 step, used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic child seed for stream `index` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t salt = 0) {
  std::uint64_t s = master ^ (0xD1B54A32D192ED03ULL * (index + 1)) ^ (salt << 17);
  return splitmix64(s);
}

inline double draw_gaussian(Rng& rng, double mean, double sigma) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return mean + sigma * dist(rng);
}

inline double draw_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace tnav
