#pragma once

#include <cstdint>

namespace duomode::simd {

// Counter-based RNG used by the Langevin integrator. The mapping is part of
// the tested public contract:
//
//   stream(seed, j) = seed XOR j                 (trajectory substream)
//   u64(stream, k)  = mix64(stream + (k+1) * kGamma)   (k-th draw, k >= 0)
//
// mix64 is the SplitMix64 output finalizer, so u64(stream, .) is the
// SplitMix64 sequence seeded with `stream`. Being stateless in (stream, k) it
// evaluates identically in any execution order and in any SIMD width.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t stream_for_trajectory(std::uint64_t seed, std::uint64_t trajectory) {
    return seed ^ trajectory;
}

inline std::uint64_t draw_u64(std::uint64_t stream, std::uint64_t counter) {
    return mix64(stream + (counter + 1) * kGamma);
}

}  // namespace duomode::simd
