#pragma once

#include <cstdint>
#include <random>

namespace hgsts {

/// The engine's generator. std::mt19937_64 is fully specified by the standard, so a given
/// seed yields the same stream on every conforming platform. Distributions from <random>
/// are not portable, so bounded draws go through uniform_index() below.
using Rng = std::mt19937_64;

/// Exact uniform draw from [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound + 1) % bound;
    std::uint64_t x = rng();
    while (x > limit) x = rng();
    return x % bound;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Seed for trial `index` of a batch: master XOR a golden-ratio-mixed index (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return master ^ z;
}

}  // namespace hgsts
