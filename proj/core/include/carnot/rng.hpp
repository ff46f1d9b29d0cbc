#pragma once

#include <cstdint>
#include <random>

namespace carnot {

// Uniform in [0, 1) from the top 53 bits; avoids distribution objects so the
// stream is stable across standard library implementations.
inline double rng_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double rng_symmetric(std::mt19937_64& gen) { return 2.0 * rng_uniform(gen) - 1.0; }

}  // namespace carnot
