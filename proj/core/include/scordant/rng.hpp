#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace scordant {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent reproducible stream for replicate `counter` of run `seed`.
/// Replicates can therefore be generated in any order (or in parallel)
/// with identical results.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t s = splitmix64(seed ^ splitmix64(counter));
    return std::mt19937_64(s);
}

/// Uniform double in [0,1) with full 53-bit resolution, engine-portable.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double normal(std::mt19937_64& rng) {
    // Box-Muller without cached second value, so streams stay position-independent.
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace scordant
