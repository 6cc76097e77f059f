#pragma once

// The d = 2 recurrence c' = (x - b^2/4)/(c - b), unrolled from c1 = 0,
// is a generalized continued fraction with constant partial numerator
// a = x - b^2/4 and constant partial denominator -b:
//
//     a / (-b + a / (-b + a / (-b + ...)))
//
// Truncating at depth k reproduces the iterate c_{k+1} exactly, and the
// limit is b/2 - sqrt(x) whenever that fixed point attracts.

#include "rootiter/iteration.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace rootiter {

struct GeneralizedCF {
    double partial_numerator = 0.0;   // x - b^2/4
    double partial_denominator = 0.0; // -b
    int depth = 1;
};

/// Constant-coefficient continued fraction induced by (x, b), truncated at
/// `depth` levels. Depths beyond the cap are rejected; linear convergence
/// makes them pointless in binary64.
inline GeneralizedCF build_gcf(double x, double b, int depth) {
    RootQuery{x, 2}.validate();
    if (b == 0.0 || !std::isfinite(b)) throw std::invalid_argument("b must be nonzero");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (depth > kDepthCap)
        throw std::invalid_argument("depth exceeds the cap of " + std::to_string(kDepthCap));
    return {x - b * b / 4.0, -b, depth};
}

/// Values of every truncation 1..depth, evaluated bottom-up. Because the
/// coefficients are constant, wrapping one more level around the depth-k
/// value yields the depth-(k+1) value, so the whole family costs one pass.
inline std::vector<double> gcf_truncation_values(const GeneralizedCF& g,
                                                 double zero_guard = kDefaultZeroGuard) {
    std::vector<double> values;
    values.reserve(static_cast<size_t>(g.depth));
    double v = 0.0;
    for (int level = 0; level < g.depth; ++level) {
        const double denom = g.partial_denominator + v;
        if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
        v = g.partial_numerator / denom;
        values.push_back(v);
    }
    return values;
}

/// The depth-level truncation value.
inline double evaluate_gcf(const GeneralizedCF& g, double zero_guard = kDefaultZeroGuard) {
    return gcf_truncation_values(g, zero_guard).back();
}

/// Check that the truncations reproduce the iteration started from c1 = 0:
/// the depth-k value must equal c_{k+1} within 8 ulp for every k <= depth.
inline bool gcf_iteration_equivalence(double x, double b, int depth,
                                      double zero_guard = kDefaultZeroGuard) {
    const GeneralizedCF g = build_gcf(x, b, depth);
    double c = 0.0;
    double v = 0.0;
    for (int k = 0; k < depth; ++k) {
        c = sqrt_step(c, x, b, zero_guard);
        const double denom = g.partial_denominator + v;
        if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
        v = g.partial_numerator / denom;
        if (ulp_distance(v, c) > 8) return false;
    }
    return true;
}

namespace detail {

inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

/// One-line rendering, e.g. "1/(-4 + 1/(-4 + 1/(-4 + ...)))".
inline std::string gcf_compact(const GeneralizedCF& g, int show_levels = 3) {
    const std::string a = detail::fmt_short(g.partial_numerator);
    const std::string d = detail::fmt_short(g.partial_denominator);
    const int levels = std::min(show_levels, g.depth);
    std::string out;
    for (int i = 0; i < levels; ++i) out += a + "/(" + d + " + ";
    out += "...";
    for (int i = 0; i < levels; ++i) out += ")";
    return out;
}

/// Indented multi-line rendering of the same fraction.
inline std::string gcf_nested(const GeneralizedCF& g, int show_levels = 3) {
    const std::string a = detail::fmt_short(g.partial_numerator);
    const std::string d = detail::fmt_short(g.partial_denominator);
    const int levels = std::min(show_levels, g.depth);
    std::string out;
    for (int i = 0; i < levels; ++i) {
        out += std::string(static_cast<size_t>(2 * i), ' ') + a + " /\n";
        out += std::string(static_cast<size_t>(2 * i), ' ') + "(" + d + " +\n";
    }
    out += std::string(static_cast<size_t>(2 * levels), ' ') + "...";
    for (int i = 0; i < levels; ++i) out += ")";
    out += "\n";
    return out;
}

} // namespace rootiter
