#pragma once

// Offset fixed-point iteration for principal d-th roots of positive reals.
//
// The root r = b/2 + c is computed by iterating the map
//
//     c' = (x - (b/2)^d) / Q(c),   Q(c) = ((b/2 + c)^d - (b/2)^d) / c
//
// where Q is expanded into its polynomial coefficients so that the
// removable singularity at c = 0 evaluates cleanly. For d = 2 the classic
// presentation r = b/2 - c with map c' = (x - b^2/4)/(c - b) is exposed as
// well; the two are exact sign conjugates of each other.

#include "rootiter/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rootiter {

/// The target computation: principal degree-th root of radicand.
struct RootQuery {
    double radicand = 0.0; // x > 0
    int degree = 2;        // d >= 2

    void validate() const {
        if (!(radicand > 0.0) || !std::isfinite(radicand))
            throw std::invalid_argument("x must be a positive finite real");
        if (degree < 2)
            throw std::invalid_argument(
                degree == 1 ? "d = 1 is trivial (the root is x itself); use d >= 2"
                            : "d must be an integer >= 2");
    }
};

/// Tunables for one iteration run.
struct IterationConfig {
    double offset = 0.0;                  // b, must be nonzero
    double start = 0.0;                   // c1
    double tol = kDefaultTol;             // step-size convergence tolerance
    int max_iter = kDefaultMaxIter;       // steps per attempt
    int max_restarts = kDefaultMaxRestarts;
    double zero_guard = kDefaultZeroGuard;

    void validate() const {
        if (offset == 0.0 || !std::isfinite(offset))
            throw std::invalid_argument(
                "b = 0 makes both fixed points neutrally stable (iterates just "
                "alternate between c1 and x/c1 and never converge); pick b != 0");
        if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("max-iter must be >= 1");
        if (max_restarts < 0) throw std::invalid_argument("max-restarts must be >= 0");
        if (!(zero_guard > 0.0)) throw std::invalid_argument("zero guard must be positive");
        if (!std::isfinite(start)) throw std::invalid_argument("c1 must be finite");
    }
};

enum class Verdict {
    ConvergedCorrect,
    ConvergedWrong,
    Diverged,
    MaxIterExceeded,
    ZeroDivisorExhausted,
};

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ConvergedCorrect: return "converged_correct";
        case Verdict::ConvergedWrong: return "converged_wrong";
        case Verdict::Diverged: return "diverged";
        case Verdict::MaxIterExceeded: return "max_iter_exceeded";
        case Verdict::ZeroDivisorExhausted: return "zero_divisor_exhausted";
    }
    return "unknown";
}

/// Which way the root is assembled from the offset and the iterate.
/// Minus is the d = 2 presentation r = b/2 - c; Plus is the general
/// presentation r = b/2 + c used internally for every degree.
enum class SignConvention { Minus, Plus };

/// Record of one run: the iterates of the last attempt, the terminal
/// verdict, and the recovered root when the run converged.
struct IterationTrace {
    std::vector<double> iterates;
    Verdict verdict = Verdict::MaxIterExceeded;
    int restarts_used = 0;
    std::optional<double> root_estimate; // present iff converged (correct or wrong)
    double residual = std::numeric_limits<double>::quiet_NaN(); // |r^d - x| at the final iterate
};

/// One step of the d = 2 map c' = (x - b^2/4)/(c - b).
inline double sqrt_step(double c, double x, double b, double zero_guard = kDefaultZeroGuard) {
    const double denom = c - b;
    if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
    return (x - b * b / 4.0) / denom;
}

namespace detail {

/// Coefficients of Q(c) = sum_{k=1..d} C(d,k) (b/2)^{d-k} c^{k-1},
/// the divided difference ((b/2+c)^d - (b/2)^d)/c with the factor c
/// cancelled symbolically.
inline std::vector<double> divided_difference_coeffs(double b, int d) {
    const double half = b / 2.0;
    std::vector<double> q(static_cast<size_t>(d));
    double binom = 1.0;
    for (int k = 1; k <= d; ++k) {
        binom = binom * static_cast<double>(d - k + 1) / static_cast<double>(k); // C(d,k)
        q[static_cast<size_t>(k - 1)] = binom * ipow(half, d - k);
    }
    return q;
}

/// The general iteration map with its coefficients precomputed, so the run
/// loop costs one Horner evaluation and one division per step.
struct OffsetMap {
    double numerator = 0.0; // x - (b/2)^d
    std::vector<double> q;  // Q(c) coefficients, ascending powers
    double zero_guard = kDefaultZeroGuard;

    double q_at(double c) const {
        double acc = q.back();
        for (size_t j = q.size() - 1; j-- > 0;) acc = acc * c + q[j];
        return acc;
    }

    double q_prime_at(double c) const {
        if (q.size() < 2) return 0.0;
        double acc = static_cast<double>(q.size() - 1) * q.back();
        for (size_t j = q.size() - 1; j-- > 1;) acc = acc * c + static_cast<double>(j) * q[j];
        return acc;
    }

    double step(double c) const {
        const double denom = q_at(c);
        if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
        return numerator / denom;
    }

    /// d/dc of step: -numerator * Q'(c) / Q(c)^2.
    double derivative(double c) const {
        const double denom = q_at(c);
        if (std::abs(denom) < zero_guard) throw zero_divisor_error(denom);
        return -numerator * q_prime_at(c) / (denom * denom);
    }
};

inline OffsetMap make_offset_map(double x, double b, int d, double zero_guard = kDefaultZeroGuard) {
    OffsetMap m;
    m.numerator = x - ipow(b / 2.0, d);
    m.q = divided_difference_coeffs(b, d);
    m.zero_guard = zero_guard;
    return m;
}

inline double divergence_bound(double b, double x) {
    return 1e12 * (1.0 + std::abs(b) + x);
}

inline double residual_tolerance(double tol, double x) {
    return std::max(1e-8, 100.0 * tol) * (1.0 + x);
}

inline double recover_root_value(double c_final, double b, SignConvention convention) {
    return convention == SignConvention::Minus ? b / 2.0 - c_final : b / 2.0 + c_final;
}

/// Fill estimate/residual/verdict once the iterate sequence is final.
/// `converged` selects between the step-size convergence verdicts and the
/// already-assigned failure verdict.
inline void finalize_trace(IterationTrace& trace, double x, double b, int d,
                           SignConvention convention, double res_tol, bool converged) {
    const double recovered = recover_root_value(trace.iterates.back(), b, convention);
    trace.residual = std::abs(std::pow(recovered, static_cast<double>(d)) - x);
    if (converged) {
        trace.root_estimate = recovered;
        trace.verdict = (recovered > 0.0 && trace.residual <= res_tol)
                            ? Verdict::ConvergedCorrect
                            : Verdict::ConvergedWrong;
    }
}

} // namespace detail

/// One step of the general map c' = (x - (b/2)^d)/Q(c). At c = 0 this is
/// the continuous extension (x - (b/2)^d)/(d (b/2)^{d-1}).
inline double nth_step(double c, double x, double b, int d,
                       double zero_guard = kDefaultZeroGuard) {
    return detail::make_offset_map(x, b, d, zero_guard).step(c);
}

/// Root assembly from the final iterate: b/2 - c (Minus) or b/2 + c (Plus).
inline double recover_root(double c_final, double b, SignConvention convention) {
    return detail::recover_root_value(c_final, b, convention);
}

namespace detail {

/// Shared driver. Scans run it with record_trace = false, keeping only the
/// start and final iterate; everything else about the run is identical.
inline IterationTrace run_iteration_impl(const RootQuery& query, const IterationConfig& cfg,
                                         SignConvention convention, bool record_trace) {
    query.validate();
    cfg.validate();
    if (convention == SignConvention::Minus && query.degree != 2)
        throw std::invalid_argument("the minus convention is defined for d = 2 only");

    const double x = query.radicand;
    const double b = cfg.offset;
    const int d = query.degree;
    const bool minus = convention == SignConvention::Minus;
    const auto map = detail::make_offset_map(x, b, d, cfg.zero_guard);
    const double bound = detail::divergence_bound(b, x);
    const double res_tol = detail::residual_tolerance(cfg.tol, x);

    IterationTrace trace;
    double start = cfg.start;
    while (true) {
        trace.iterates.assign(1, start);
        double c = start;
        bool zero_hit = false;
        for (int step = 0; step < cfg.max_iter; ++step) {
            double next;
            try {
                // The Minus map is the exact sign conjugate of the Plus map.
                next = minus ? -map.step(-c) : map.step(c);
            } catch (const zero_divisor_error&) {
                zero_hit = true;
                break;
            }
            if (record_trace || trace.iterates.size() < 2)
                trace.iterates.push_back(next);
            else
                trace.iterates.back() = next; // lean mode keeps {start, latest}
            if (std::abs(next) > bound) {
                trace.verdict = Verdict::Diverged;
                detail::finalize_trace(trace, x, b, d, convention, res_tol, false);
                return trace;
            }
            if (std::abs(next - c) <= cfg.tol) {
                detail::finalize_trace(trace, x, b, d, convention, res_tol, true);
                return trace;
            }
            c = next;
        }
        if (!zero_hit) {
            trace.verdict = Verdict::MaxIterExceeded;
            detail::finalize_trace(trace, x, b, d, convention, res_tol, false);
            return trace;
        }
        if (trace.restarts_used == cfg.max_restarts) {
            trace.verdict = Verdict::ZeroDivisorExhausted;
            detail::finalize_trace(trace, x, b, d, convention, res_tol, false);
            return trace;
        }
        ++trace.restarts_used;
        start = start + 1.0 + std::abs(b) / 2.0;
    }
}

} // namespace detail

/// Run the iteration to convergence, divergence, or budget exhaustion.
///
/// A division by (near-)zero restarts the attempt from a deterministically
/// perturbed start, c1 <- c1 + 1 + |b|/2, up to max_restarts times; the
/// returned trace holds the iterates of the last attempt only. A run counts
/// as ConvergedCorrect only when the recovered root is positive and its
/// residual |r^d - x| passes the tolerance derived from tol; convergence to
/// anything else is ConvergedWrong.
inline IterationTrace run_iteration(const RootQuery& query, const IterationConfig& cfg,
                                    SignConvention convention = SignConvention::Plus) {
    return detail::run_iteration_impl(query, cfg, convention, true);
}

} // namespace rootiter
