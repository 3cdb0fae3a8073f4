#pragma once

#include <cstdint>
#include <random>

namespace tomo {

// splitmix64 finalizer; spreads (seed, stream) into a well-mixed 64-bit state.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Independent deterministic substream for (seed, stream). Ensemble samples and
// the different noise draws of one run each get their own stream, so execution
// order can never change results.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix_seed(seed, stream));
}

} // namespace tomo
