#pragma once

// Portable seeded randomness. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; every derived draw below is implemented
// here rather than through <random> distributions, whose algorithms vary
// between standard libraries.
//
//   uniform   (next >> 11) * 2^-53, in [0, 1)
//   normal    Box-Muller, u1 = 1 - uniform, second value cached
//   int [0,n) rejection sampling, no modulo bias
//
// Per-trial seeds: trial_seed(master, i) = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15).

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ripkit/linalg.hpp"

namespace ripkit {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();
  std::uint64_t uniform_int(std::uint64_t n);
  double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

// k distinct indices from {0..p-1}, uniformly, returned sorted.
std::vector<Index> random_support(Rng& rng, Index p, Index k);

}  // namespace ripkit
