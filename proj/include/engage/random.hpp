#pragma once

#include <cstdint>
#include <random>

namespace engage {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derived stream seed: identical regardless of the order streams are used in.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

// Uniform double in [0, 1) from the top 53 bits of the engine output.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Poisson draw with a fixed algorithm choice (product inversion below mean 10,
// transformed rejection above), so a seeded engine reproduces counts exactly.
std::int64_t poisson_draw(std::mt19937_64& rng, double mean);

}  // namespace engage
