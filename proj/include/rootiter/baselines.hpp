#pragma once

// Reference root finders for head-to-head comparison with the offset
// iteration: Newton-Raphson on f(t) = t^d - k, its Babylonian form for
// square roots, and Halley's method. All of them produce the same trace
// and verdict shape as the core driver, with iterates kept in root space
// so one error/order estimator serves every method.

#include "rootiter/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace rootiter {

enum class BaselineMethod { NewtonRaphson, Babylonian, Halley, OffsetFixedPoint };

inline const char* baseline_method_name(BaselineMethod m) {
    switch (m) {
        case BaselineMethod::NewtonRaphson: return "newton";
        case BaselineMethod::Babylonian: return "babylonian";
        case BaselineMethod::Halley: return "halley";
        case BaselineMethod::OffsetFixedPoint: return "offset";
    }
    return "unknown";
}

/// Estimated convergence order and (for order-1 sequences) the per-step
/// error contraction ratio.
struct ConvergenceEstimate {
    double order = 0.0;
    double rate = std::numeric_limits<double>::quiet_NaN();
    int samples_used = 0;
};

// Errors below the floor are roundoff noise; errors above the cap are
// transient. Order samples are anchored at iterates inside the window.
inline constexpr double kEstimateErrorFloor = 1e-13;
inline constexpr double kEstimateErrorCap = 1e-2;

/// Newton-Raphson update for f(t) = t^d - k.
inline double newton_step(double x_n, double k, int d, double zero_guard = kDefaultZeroGuard) {
    if (std::abs(x_n) < zero_guard) throw zero_divisor_error(x_n);
    const double f = std::pow(x_n, static_cast<double>(d)) - k;
    const double fp = static_cast<double>(d) * std::pow(x_n, static_cast<double>(d - 1));
    return x_n - f / fp;
}

/// The d = 2 Newton update in its classical averaged form.
inline double babylonian_step(double x_n, double k, double zero_guard = kDefaultZeroGuard) {
    if (std::abs(x_n) < zero_guard) throw zero_divisor_error(x_n);
    return (x_n + k / x_n) / 2.0;
}

/// Halley update for f(t) = t^d - k.
inline double halley_step(double x_n, double k, int d, double zero_guard = kDefaultZeroGuard) {
    if (std::abs(x_n) < zero_guard) throw zero_divisor_error(x_n);
    const double f = std::pow(x_n, static_cast<double>(d)) - k;
    const double fp = static_cast<double>(d) * std::pow(x_n, static_cast<double>(d - 1));
    const double fpp =
        static_cast<double>(d) * static_cast<double>(d - 1) * std::pow(x_n, static_cast<double>(d - 2));
    const double denom = 2.0 * fp * fp - f * fpp;
    if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
    return x_n - 2.0 * f * fp / denom;
}

/// Iterate the chosen method from x1 until the step size drops to tol or a
/// budget runs out. Iterates are root approximations for every method; the
/// offset method (which needs offset_b) delegates to run_iteration and maps
/// its iterates through b/2 + c.
inline IterationTrace run_baseline(BaselineMethod method, const RootQuery& query, double x1,
                                   double tol = kDefaultTol, int max_iter = kDefaultMaxIter,
                                   std::optional<double> offset_b = std::nullopt) {
    query.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max-iter must be >= 1");
    if (x1 == 0.0 || !std::isfinite(x1)) throw std::invalid_argument("x1 must be finite and nonzero");
    if (method == BaselineMethod::Babylonian && query.degree != 2)
        throw std::invalid_argument("the Babylonian method is defined for d = 2 only");

    const double k = query.radicand;
    const int d = query.degree;

    if (method == BaselineMethod::OffsetFixedPoint) {
        if (!offset_b) throw std::invalid_argument("the offset method needs b");
        IterationConfig cfg;
        cfg.offset = *offset_b;
        cfg.start = x1 - *offset_b / 2.0;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        IterationTrace trace = run_iteration(query, cfg, SignConvention::Plus);
        for (double& c : trace.iterates) c = *offset_b / 2.0 + c;
        return trace;
    }

    const auto step = [&](double t) {
        switch (method) {
            case BaselineMethod::Babylonian: return babylonian_step(t, k);
            case BaselineMethod::Halley: return halley_step(t, k, d);
            default: return newton_step(t, k, d);
        }
    };
    const double bound = detail::divergence_bound(0.0, k);
    const double res_tol = detail::residual_tolerance(tol, k);

    IterationTrace trace;
    trace.iterates.assign(1, x1);
    double t = x1;
    for (int n = 0; n < max_iter; ++n) {
        double next;
        try {
            next = step(t);
        } catch (const zero_divisor_error&) {
            trace.verdict = Verdict::ZeroDivisorExhausted;
            detail::finalize_trace(trace, k, 0.0, d, SignConvention::Plus, res_tol, false);
            return trace;
        }
        trace.iterates.push_back(next);
        if (std::abs(next) > bound) {
            trace.verdict = Verdict::Diverged;
            detail::finalize_trace(trace, k, 0.0, d, SignConvention::Plus, res_tol, false);
            return trace;
        }
        if (std::abs(next - t) <= tol) {
            detail::finalize_trace(trace, k, 0.0, d, SignConvention::Plus, res_tol, true);
            return trace;
        }
        t = next;
    }
    trace.verdict = Verdict::MaxIterExceeded;
    detail::finalize_trace(trace, k, 0.0, d, SignConvention::Plus, res_tol, false);
    return trace;
}

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

/// Estimate the convergence order of a trace against a known root.
///
/// Errors e_n = |iterate_n - root|. Each interior iterate whose error lies
/// in (1e-13, 1e-2) anchors one sample log(e_{n+1}/e_n)/log(e_n/e_{n-1});
/// neighbors polluted by roundoff (below the floor) or non-decreasing
/// error triples are skipped. Order and rate are medians, which shrugs off
/// the leading transient and the trailing roundoff-limited sample.
inline ConvergenceEstimate estimate_convergence(const IterationTrace& trace, double true_root) {
    const auto& it = trace.iterates;
    std::vector<double> e(it.size());
    for (size_t i = 0; i < it.size(); ++i) e[i] = std::abs(it[i] - true_root);

    size_t above_floor = 0;
    for (double v : e)
        if (v > kEstimateErrorFloor) ++above_floor;
    if (it.size() < 4 || above_floor < 4)
        throw insufficient_data_error("need at least 4 iterates with errors above roundoff");

    std::vector<double> orders;
    std::vector<double> ratios;
    for (size_t n = 1; n + 1 < e.size(); ++n) {
        if (e[n] <= kEstimateErrorFloor || e[n] >= kEstimateErrorCap) continue;
        if (e[n + 1] > kEstimateErrorFloor && e[n + 1] < kEstimateErrorCap)
            ratios.push_back(e[n + 1] / e[n]);
        if (e[n - 1] <= kEstimateErrorFloor || e[n + 1] <= kEstimateErrorFloor) continue;
        const double num = std::log(e[n + 1] / e[n]);
        const double den = std::log(e[n] / e[n - 1]);
        if (!(num < 0.0) || !(den < 0.0)) continue; // want strictly shrinking errors
        const double q = num / den;
        if (std::isfinite(q)) orders.push_back(q);
    }
    if (orders.empty())
        throw insufficient_data_error("no consecutive error triple inside the estimation window");

    ConvergenceEstimate est;
    est.order = detail::median_of(orders);
    est.samples_used = static_cast<int>(orders.size());
    if (!ratios.empty()) est.rate = detail::median_of(ratios);
    return est;
}

} // namespace rootiter
