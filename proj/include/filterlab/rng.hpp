#ifndef FILTERLAB_RNG_HPP
#define FILTERLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace filterlab {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates neighbouring stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stream for Monte Carlo run `run_index`: seeded from base_seed XOR run_index.
inline Rng make_stream(std::uint64_t base_seed, std::uint64_t run_index) {
    return Rng(mix_seed(base_seed ^ run_index));
}

}  // namespace filterlab

#endif  // FILTERLAB_RNG_HPP
