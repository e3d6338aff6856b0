// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// random.hpp: seeding and normal deviates with a fully pinned bit stream.
//
// Reproducibility contract: every random quantity in this library derives from
// std::mt19937_64 (whose output sequence is fixed by the standard) through the
// transforms below, which are defined here rather than borrowed from the
// standard library's distributions (their streams are implementation
// defined). Given the same seed, any standards-conforming platform produces
// the same bits.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace eprsim {

// SplitMix64 finalizer; used as the mixing stage for child-seed derivation.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Child stream seed for one trajectory of one initial condition of one
// particle. Fields are absorbed one at a time through the finalizer, so any
// change to any field yields an unrelated stream:
//   s = splitmix64(master); s = splitmix64(s ^ particle);
//   s = splitmix64(s ^ initial_condition); return splitmix64(s ^ trajectory).
inline std::uint64_t child_seed(std::uint64_t master_seed,
                                std::uint64_t particle,
                                std::uint64_t initial_condition,
                                std::uint64_t trajectory) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ particle);
  s = splitmix64(s ^ initial_condition);
  return splitmix64(s ^ trajectory);
}

// mt19937_64 plus a Box-Muller normal sampler. Each gaussian() consumes
// exactly two engine draws (the sine branch is discarded so no state is
// carried between calls).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform on (0, 1]: (x >> 11) + 1 scaled by 2^-53. Never returns 0, so it
  // is safe under log().
  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal deviate: sqrt(-2 ln u1) * cos(2 pi u2).
  double gaussian() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

} // namespace eprsim
