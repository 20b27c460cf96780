#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>

namespace riscov {

using Rng = std::mt19937_64;

/// Mixes a master seed with a role tag ("scene", "sats-test-3", "pga-pop-1", ...)
/// into an independent 64-bit stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag);

inline Rng make_stream(std::uint64_t master, std::string_view tag) {
    return Rng(derive_seed(master, tag));
}

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Runs fn(i) for i in [0, n) across worker threads. Each index must write
/// only its own output slot so the merged result is schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace riscov
