#pragma once

// Fixed-point analysis of the offset iteration map: derivative-magnitude
// classification, the seven d = 2 offset regimes, analytic validity bounds
// for d = 3, and empirical scans over b for arbitrary degree.

#include "rootiter/iteration.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace rootiter {

enum class StabilityClass { Unstable, Neutral, Stable, Superstable };

inline const char* stability_class_name(StabilityClass c) {
    switch (c) {
        case StabilityClass::Unstable: return "unstable";
        case StabilityClass::Neutral: return "neutral";
        case StabilityClass::Stable: return "stable";
        case StabilityClass::Superstable: return "superstable";
    }
    return "unknown";
}

enum class FixedPointLabel { CMinus, CPlus, General };

inline const char* fixed_point_label_name(FixedPointLabel w) {
    switch (w) {
        case FixedPointLabel::CMinus: return "c_minus";
        case FixedPointLabel::CPlus: return "c_plus";
        case FixedPointLabel::General: return "general";
    }
    return "unknown";
}

struct FixedPointInfo {
    double location = 0.0;
    double derivative_magnitude = 0.0; // +inf when the point sits on a pole of the map
    StabilityClass cls = StabilityClass::Stable;
    FixedPointLabel which = FixedPointLabel::General;
};

/// The seven ranges of b relative to +-2 sqrt(x) that govern which d = 2
/// fixed point attracts.
enum class Regime {
    BelowMinusTwoSqrtX,
    AtMinusTwoSqrtX,
    BetweenMinusTwoSqrtXAndZero,
    AtZero,
    BetweenZeroAndTwoSqrtX,
    AtTwoSqrtX,
    AboveTwoSqrtX,
};

inline const char* regime_label(Regime r) {
    switch (r) {
        case Regime::BelowMinusTwoSqrtX: return "b < -2*sqrt(x)";
        case Regime::AtMinusTwoSqrtX: return "b = -2*sqrt(x)";
        case Regime::BetweenMinusTwoSqrtXAndZero: return "-2*sqrt(x) < b < 0";
        case Regime::AtZero: return "b = 0";
        case Regime::BetweenZeroAndTwoSqrtX: return "0 < b < 2*sqrt(x)";
        case Regime::AtTwoSqrtX: return "b = 2*sqrt(x)";
        case Regime::AboveTwoSqrtX: return "2*sqrt(x) < b";
    }
    return "unknown";
}

struct StabilityReport {
    RootQuery query;
    double b = 0.0;
    std::vector<FixedPointInfo> fixed_points;
    std::optional<Regime> regime; // d = 2 only
};

struct ScanInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ScanResult {
    RootQuery query;
    std::vector<double> grid;      // evaluated b values (an exact-zero grid point is skipped)
    std::vector<Verdict> verdicts; // aligned with grid
    std::vector<std::optional<double>> estimates; // recovered root per b, when converged
    std::vector<double> residuals;                // |r^d - x| at the final iterate per b
    std::vector<ScanInterval> intervals;
    std::optional<double> least_positive_b; // bisection-refined threshold
};

/// Derivative of the iteration map at c. For d = 2 this is the derivative
/// of the classic map (x - b^2/4)/(c - b); for d >= 3 it is the derivative
/// of the general map (x - (b/2)^d)/Q(c). Signed; callers usually take the
/// magnitude.
inline double map_derivative(double c, double x, double b, int d,
                             double zero_guard = kDefaultZeroGuard) {
    if (d == 2) {
        const double denom = c - b;
        if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
        return -(x - b * b / 4.0) / (denom * denom);
    }
    return detail::make_offset_map(x, b, d, zero_guard).derivative(c);
}

/// Bucket a derivative magnitude. The equality cases (superstable, neutral)
/// are exact algebraic coincidences, so class_tol is kept tight.
inline StabilityClass classify(double derivative_magnitude, double class_tol = kDefaultClassTol) {
    if (!(class_tol > 0.0) || class_tol >= 0.5)
        throw std::invalid_argument("class_tol must lie in (0, 0.5)");
    if (std::isnan(derivative_magnitude) || derivative_magnitude < 0.0)
        throw std::invalid_argument("derivative magnitude must be nonnegative");
    if (derivative_magnitude <= class_tol) return StabilityClass::Superstable;
    if (std::abs(derivative_magnitude - 1.0) <= class_tol) return StabilityClass::Neutral;
    if (derivative_magnitude > 1.0 + class_tol) return StabilityClass::Unstable;
    return StabilityClass::Stable;
}

/// All real fixed points of the map, classified. d = 2 reports the classic
/// pair b/2 -+ sqrt(x); d >= 3 reports x^(1/d) - b/2 (both signs of the
/// radical for even d). A fixed point sitting on a pole of the map gets an
/// infinite derivative magnitude and is unstable.
inline std::vector<FixedPointInfo> fixed_points(double x, double b, int d,
                                                double class_tol = kDefaultClassTol,
                                                double zero_guard = kDefaultZeroGuard) {
    RootQuery{x, d}.validate();
    const double root = nth_root(x, d);
    std::vector<std::pair<double, FixedPointLabel>> locations;
    if (d == 2) {
        locations.emplace_back(b / 2.0 - root, FixedPointLabel::CMinus);
        locations.emplace_back(b / 2.0 + root, FixedPointLabel::CPlus);
    } else if (d % 2 == 1) {
        locations.emplace_back(root - b / 2.0, FixedPointLabel::General);
    } else {
        locations.emplace_back(root - b / 2.0, FixedPointLabel::CPlus);
        locations.emplace_back(-root - b / 2.0, FixedPointLabel::CMinus);
    }

    std::vector<FixedPointInfo> out;
    out.reserve(locations.size());
    for (const auto& [location, which] : locations) {
        FixedPointInfo info;
        info.location = location;
        info.which = which;
        try {
            info.derivative_magnitude = std::abs(map_derivative(location, x, b, d, zero_guard));
        } catch (const zero_divisor_error&) {
            info.derivative_magnitude = std::numeric_limits<double>::infinity();
        }
        info.cls = classify(info.derivative_magnitude, class_tol);
        out.push_back(info);
    }
    return out;
}

namespace detail {

inline Regime classify_regime(double x, double b) {
    const double twice_root = 2.0 * std::sqrt(x);
    const double edge_tol = 1e-12 * (1.0 + twice_root);
    if (std::abs(b) <= edge_tol) return Regime::AtZero;
    if (std::abs(b - twice_root) <= edge_tol) return Regime::AtTwoSqrtX;
    if (std::abs(b + twice_root) <= edge_tol) return Regime::AtMinusTwoSqrtX;
    if (b < -twice_root) return Regime::BelowMinusTwoSqrtX;
    if (b < 0.0) return Regime::BetweenMinusTwoSqrtXAndZero;
    if (b < twice_root) return Regime::BetweenZeroAndTwoSqrtX;
    return Regime::AboveTwoSqrtX;
}

} // namespace detail

/// Fixed points and classes at a specific b, plus the regime label for d = 2.
inline StabilityReport stability_report(const RootQuery& query, double b,
                                        double class_tol = kDefaultClassTol,
                                        double zero_guard = kDefaultZeroGuard) {
    query.validate();
    StabilityReport rep;
    rep.query = query;
    rep.b = b;
    rep.fixed_points = fixed_points(query.radicand, b, query.degree, class_tol, zero_guard);
    if (query.degree == 2) rep.regime = detail::classify_regime(query.radicand, b);
    return rep;
}

struct RegimeRow {
    Regime regime;
    double sample_b = 0.0;
    StabilityClass c_minus = StabilityClass::Stable;
    StabilityClass c_plus = StabilityClass::Stable;
};

/// The d = 2 regime table instantiated at x: one representative b per open
/// regime (midpoint of the bracketing interval, clipped at 10 sqrt(x)) and
/// the exact boundary values 0 and +-2 sqrt(x).
inline std::array<RegimeRow, 7> regime_table(double x, double class_tol = kDefaultClassTol,
                                             double zero_guard = kDefaultZeroGuard) {
    RootQuery{x, 2}.validate();
    const double s = std::sqrt(x);
    const std::array<std::pair<Regime, double>, 7> samples = {{
        {Regime::BelowMinusTwoSqrtX, -6.0 * s},
        {Regime::AtMinusTwoSqrtX, -2.0 * s},
        {Regime::BetweenMinusTwoSqrtXAndZero, -s},
        {Regime::AtZero, 0.0},
        {Regime::BetweenZeroAndTwoSqrtX, s},
        {Regime::AtTwoSqrtX, 2.0 * s},
        {Regime::AboveTwoSqrtX, 6.0 * s},
    }};
    std::array<RegimeRow, 7> table{};
    for (size_t i = 0; i < samples.size(); ++i) {
        const auto [regime, b] = samples[i];
        RegimeRow row;
        row.regime = regime;
        row.sample_b = b;
        for (const auto& fp : fixed_points(x, b, 2, class_tol, zero_guard)) {
            if (fp.which == FixedPointLabel::CMinus) row.c_minus = fp.cls;
            if (fp.which == FixedPointLabel::CPlus) row.c_plus = fp.cls;
        }
        table[i] = row;
    }
    return table;
}

/// Roots of |f'| = 1 in b for the d = 3 map: cbrt(x) * (+-sqrt(3) - 1).
/// The iteration fails to reach the principal cube root for b strictly
/// between the two values and succeeds outside them.
inline std::pair<double, double> cubic_validity_bounds(double x) {
    RootQuery{x, 3}.validate();
    const double root = std::cbrt(x);
    const double sqrt3 = std::sqrt(3.0);
    return {root * (sqrt3 - 1.0), root * (-sqrt3 - 1.0)};
}

namespace detail {

/// Smallest positive b in (lo, hi] that still yields ConvergedCorrect,
/// bisected down to 1e-4 width. predicate(hi) holds on entry.
template <typename WorksAt>
inline double refine_threshold(double lo, double hi, WorksAt works) {
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (works(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace detail

/// Run the iteration across an arithmetic grid of b values and collect the
/// verdict landscape. cfg_template supplies everything except the offset;
/// the conventional oracle-free start is c1 = 1. Deterministic in all inputs.
inline ScanResult scan_b(const RootQuery& query, double b_min, double b_max, int steps,
                         const IterationConfig& cfg_template) {
    query.validate();
    if (!(b_min < b_max)) throw std::invalid_argument("b-min must be below b-max");
    if (steps < 2) throw std::invalid_argument("steps must be >= 2");

    ScanResult result;
    result.query = query;
    result.grid.reserve(static_cast<size_t>(steps));
    const double span = b_max - b_min;
    const auto run_at = [&](double b) {
        IterationConfig cfg = cfg_template;
        cfg.offset = b;
        // Grid runs skip trace recording; only the verdict and final value matter.
        return detail::run_iteration_impl(query, cfg, SignConvention::Plus, false);
    };
    for (int i = 0; i < steps; ++i) {
        const double b = b_min + span * static_cast<double>(i) / static_cast<double>(steps - 1);
        if (b == 0.0) continue; // the neutral value has no verdict
        const IterationTrace trace = run_at(b);
        result.grid.push_back(b);
        result.verdicts.push_back(trace.verdict);
        result.estimates.push_back(trace.root_estimate);
        result.residuals.push_back(trace.residual);
    }

    for (size_t i = 0; i < result.grid.size();) {
        if (result.verdicts[i] != Verdict::ConvergedCorrect) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < result.grid.size() && result.verdicts[j + 1] == Verdict::ConvergedCorrect) ++j;
        result.intervals.push_back({result.grid[i], result.grid[j]});
        i = j + 1;
    }

    for (size_t i = 0; i < result.grid.size(); ++i) {
        if (result.grid[i] <= 0.0 || result.verdicts[i] != Verdict::ConvergedCorrect) continue;
        const bool refinable = i > 0 && result.grid[i - 1] > 0.0 &&
                               result.verdicts[i - 1] != Verdict::ConvergedCorrect;
        result.least_positive_b =
            refinable ? detail::refine_threshold(result.grid[i - 1], result.grid[i],
                                                 [&](double b) {
                                                     return run_at(b).verdict ==
                                                            Verdict::ConvergedCorrect;
                                                 })
                      : result.grid[i];
        break;
    }
    return result;
}

/// b^d / x for an empirically located threshold b.
inline double threshold_ratio(double least_positive_b, const RootQuery& query) {
    query.validate();
    if (!(least_positive_b > 0.0))
        throw std::invalid_argument("threshold ratio needs a positive b");
    return std::pow(least_positive_b, static_cast<double>(query.degree)) / query.radicand;
}

} // namespace rootiter
