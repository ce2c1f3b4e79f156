#pragma once

#include <cstdint>
#include <random>

namespace supou {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream index); the pair is mixed through seed_seq
// so neighbouring indices do not give correlated generator states.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

}  // namespace supou
