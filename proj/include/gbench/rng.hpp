#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gbench {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for the index-th member of a named stream, e.g.
/// derive_seed("sphere-10D", "method:PSO", 17, master).
std::uint64_t derive_seed(std::string_view problem, std::string_view role, std::uint64_t index,
                          std::uint64_t master) noexcept;

/// Child seed of an already derived seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace gbench
