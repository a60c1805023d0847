#pragma once

#include <cstdint>
#include <random>

namespace ribbonkit::detail {

/// Independent generator for one start of a multistart search.
inline std::mt19937_64 start_rng(std::uint64_t seed, std::uint64_t start) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(start >> 32)};
    return std::mt19937_64(seq);
}

// std::uniform_real_distribution is not bit-reproducible across standard
// libraries; this is.
inline double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& gen, double lo, double hi) { return lo + (hi - lo) * uniform01(gen); }

}  // namespace ribbonkit::detail
