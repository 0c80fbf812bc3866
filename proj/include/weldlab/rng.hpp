// rng.hpp - deterministic seeding: every random stream in the project is
// derived from one root seed by hashing (root, stream tag, index) so that
// instance construction, label shuffling, tester randomness and adversary
// trials draw from independent, reproducible streams.
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace weldlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// FNV-1a over the tag string, folded into the seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return splitmix64(hash_combine(hash_combine(root, h), index));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t root, std::string_view tag, std::uint64_t index = 0) {
    return Rng(derive_seed(root, tag, index));
}

// Uniform integer in [0, n). n must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

} // namespace weldlab
