#pragma once

// Helpers shared by the test suites: a seeded generator for reproducible
// property samples and an exact-rational walk of the x = 5, b = 4 map.

#include <cstdint>
#include <numeric>
#include <random>

namespace testutil {

inline std::mt19937_64 seeded_rng(std::uint64_t seed = 20210108u) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

/// Reduced fraction p/q. The map c -> (5 - 4)/(c - 4) = 1/(c - 4) stays
/// rational, so the whole worked trace has exact expected values.
struct Frac {
    long long p = 0;
    long long q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

inline Frac sqrt5_b4_step(Frac c) {
    long long p = c.q;
    long long q = c.p - 4 * c.q;
    const long long g = std::gcd(p < 0 ? -p : p, q < 0 ? -q : q);
    p /= g;
    q /= g;
    if (q < 0) {
        p = -p;
        q = -q;
    }
    return {p, q};
}

} // namespace testutil
