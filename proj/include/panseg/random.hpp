#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace panseg {

// One user-facing seed fans out to every randomized stage through the
// derivations below. Reruns with the same seed replay the exact same
// streams; unrelated stages never share a stream.

inline std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// seed for a named stage ("phantom", "folds", "init", "augment", ...)
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
    return mix64(seed ^ hash_str(stage));
}

// seed for the index-th item within a stage (case index, epoch, layer, ...)
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index) {
    return mix64(derive_seed(seed, stage) + 0x632be59bd9b4e019ULL * (index + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline double uniform(Rng& rng, double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double normal(Rng& rng, double mean = 0.0, double sigma = 1.0) {
    return std::normal_distribution<double>(mean, sigma)(rng);
}

} // namespace panseg
