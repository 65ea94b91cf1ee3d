#pragma once

#include <array>
#include <cstdint>

namespace stoplab {

/// Philox4x32-10 block: one 128-bit output per (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key) noexcept;

/// Uniforms in (0, 1) for stream (seed, path) at position step; two per block.
std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t path, std::uint64_t step) noexcept;

/// Standard normal for (seed, path, step), by Box-Muller on uniform_pair.
double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step) noexcept;

/// Mix a seed with a stream label, for independent derived streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept;

}  // namespace stoplab
