#pragma once

#include <cstdint>
#include <random>

namespace owc {

using Rng = std::mt19937_64;

// Uniform double in [0, 1). Hand-rolled from the top 53 bits so draws are
// identical across standard libraries (std::uniform_real_distribution is
// implementation-defined).
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling over the smallest covering
// power-of-two range keeps the draw unbiased and reproducible.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n - 1);
    for (;;) {
        const std::uint64_t v = rng() & mask;
        if (v < n) return v;
    }
}

}  // namespace owc
