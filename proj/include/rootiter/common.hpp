#pragma once

// Shared error types, numeric defaults and small helpers used across the
// library. Everything is header-only and operates on IEEE-754 binary64.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rootiter {

inline constexpr const char* kVersion = "0.1.0";

// Numeric defaults. A quotient with a denominator magnitude below the zero
// guard is treated as a division by zero rather than evaluated.
inline constexpr double kDefaultZeroGuard = 1e-12;
inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kDefaultMaxIter = 10'000;
// Threshold scans rate a run "working" only if it converges within budget;
// near a stability boundary the contraction ratio approaches 1, so scans
// get a deeper default budget to keep measured edges sharp.
inline constexpr int kDefaultScanMaxIter = 100'000;
inline constexpr int kDefaultMaxRestarts = 3;
inline constexpr double kDefaultClassTol = 1e-9;
inline constexpr int kDepthCap = 10'000;

/// Thrown when a step would divide by a denominator below the zero guard.
class zero_divisor_error : public std::runtime_error {
public:
    explicit zero_divisor_error(double denominator)
        : std::runtime_error("denominator magnitude " + std::to_string(std::abs(denominator)) +
                             " below zero guard"),
          denominator_(denominator) {}

    double denominator() const { return denominator_; }

private:
    double denominator_;
};

/// Thrown when a sequence is too short (or too polluted by roundoff) to
/// support a convergence-order estimate.
class insufficient_data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// x^n for small integer n by repeated multiplication.
inline double ipow(double x, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= x;
    return acc;
}

/// Principal d-th root of a nonnegative value via the platform primitives.
/// sqrt and cbrt are correctly rounded (or within 1 ulp) on mainstream
/// libms; this is the ground-truth root used by analyses and tests.
inline double nth_root(double x, int degree) {
    if (degree == 2) return std::sqrt(x);
    if (degree == 3) return std::cbrt(x);
    return std::pow(x, 1.0 / static_cast<double>(degree));
}

/// Number of representable binary64 values between a and b (0 when equal,
/// -0 and +0 count as the same value). NaN input yields the maximum.
inline std::uint64_t ulp_distance(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<std::uint64_t>::max();
    const auto index = [](double v) -> std::int64_t {
        const auto bits = std::bit_cast<std::int64_t>(v);
        // Fold the sign-magnitude float line onto a monotone integer line.
        return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
    };
    const std::int64_t ia = index(a);
    const std::int64_t ib = index(b);
    return ia >= ib ? static_cast<std::uint64_t>(ia) - static_cast<std::uint64_t>(ib)
                    : static_cast<std::uint64_t>(ib) - static_cast<std::uint64_t>(ia);
}

} // namespace rootiter
