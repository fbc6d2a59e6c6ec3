#pragma once

#include <cstdint>
#include <random>

namespace mrwb {

using Engine = std::mt19937_64;

// SplitMix64 finalizer. Used to derive child seeds and for counter-based draws.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return mix64(mix64(mix64(base) ^ a) ^ (b + 0x632be59bd9b4e019ULL));
}

// Independent generator for (seed, stream). Distinct streams of one seed are
// seeded through seed_seq, so nearby ids do not produce correlated states.
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x4d52575fU};
    return Engine(seq);
}

// Uniform in [0,1) from a counter triple, 53-bit resolution.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
    const std::uint64_t h = derive_seed(seed, i, j);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace streams {
inline constexpr std::uint64_t kIncrements = 1;
inline constexpr std::uint64_t kBestArm = 2;
inline constexpr std::uint64_t kCoins = 3;
inline constexpr std::uint64_t kPolicy = 4;
}  // namespace streams

}  // namespace mrwb
