#pragma once

#include <cstdint>
#include <random>

namespace predsim {

using RngStream = std::mt19937_64;

// splitmix64 finalizer (Steele, Lea & Flood / Vigna's public-domain mixer).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent sub-seed from (seed, word). Chained calls give the
// documented stream derivation: every trial owns mix_seed(mix_seed(root,
// design_tag), trial), so execution order and thread count cannot change what
// any trial draws.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t word) {
    return splitmix64(seed ^ splitmix64(word));
}

inline RngStream make_stream(std::uint64_t seed) { return RngStream(seed); }

}  // namespace predsim
