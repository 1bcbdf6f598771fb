#pragma once

#include <cstdint>
#include <random>

namespace lpbox {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates nearby inputs.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for substream `stream` of a master seed. Streams are independent of
// scheduling, so parallel consumers reproduce serial results.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace lpbox
