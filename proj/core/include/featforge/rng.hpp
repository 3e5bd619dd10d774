#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace featforge {

using Rng = std::mt19937_64;

// Mixes a master seed with stream indices (graph index, scheme index, ...) so
// that per-item streams do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace featforge
