#pragma once

// Deterministic random numbers. The generator and the per-trial seed mix are
// fixed so that other implementations can reproduce every instance:
//
//   mix(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//             z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//             return z ^ (z >> 31)
//   splitmix64(x)          = mix(x + 0x9E3779B97F4A7C15)
//   trial_seed(seed, t)    = splitmix64(seed ^ splitmix64(t))
//   Rng::next():  state += 0x9E3779B97F4A7C15; return mix(state)
//   uniform():    (next() >> 11) * 2^-53
//   normal():     Box-Muller, sqrt(-2 ln(1 - u1)) cos(2 pi u2), no caching

#include <cstdint>
#include <vector>

#include "dpk/linalg.hpp"

namespace dpk {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  /// (N(0,1) + i N(0,1)) / sqrt(2).
  Complex complex_normal();
  /// Uniform integer in [0, n).
  Index below(Index n);
  bool coin(double p_true = 0.5);
  std::vector<Index> permutation(Index n);

 private:
  std::uint64_t state_;
};

}  // namespace dpk
