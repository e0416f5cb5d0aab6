#pragma once

#include <cstdint>
#include <random>

namespace cefs {

// The standard distributions are implementation-defined, so draws are derived
// from the raw engine output to keep results identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound must be > 0.
inline std::uint64_t bounded(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = Rng::max() - Rng::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = bounded(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace cefs
