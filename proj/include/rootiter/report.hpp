#pragma once

// Rendering of command results as human-readable text, CSV, or a JSON
// experiment record. Numeric fields in the machine formats carry 17
// significant digits so a re-parse reproduces every double bit-exactly,
// and identical inputs always produce identical bytes.

#include "rootiter/baselines.hpp"
#include "rootiter/contfrac.hpp"
#include "rootiter/iteration.hpp"
#include "rootiter/stability.hpp"

#include <array>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rootiter {

enum class OutputFormat { Text, Csv, Json };

inline OutputFormat parse_output_format(const std::string& name) {
    if (name == "text") return OutputFormat::Text;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw std::invalid_argument("unknown format '" + name + "' (expected text, csv or json)");
}

/// 17 significant digits: enough to reproduce any binary64 value exactly.
inline std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Display precision for text tables.
inline std::string format_display(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace detail {

inline std::string json_number(double v) {
    if (!std::isfinite(v)) return "null"; // JSON has no nan/inf
    return format_sig17(v);
}

inline std::string json_opt_number(const std::optional<double>& v) {
    return v ? json_number(*v) : "null";
}

inline std::string csv_number(double v) { return format_sig17(v); }

inline std::string csv_opt_number(const std::optional<double>& v) {
    return v ? csv_number(*v) : std::string{};
}

inline std::string pad(std::string s, size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

/// Wrap per-command results in the common envelope.
inline std::string json_envelope(const std::string& command, const std::string& inputs,
                                 const std::string& results) {
    std::string out = "{\"command\":\"";
    out += command;
    out += "\",\"inputs\":";
    out += inputs;
    out += ",\"results\":";
    out += results;
    out += ",\"version\":\"";
    out += kVersion;
    out += "\"}\n";
    return out;
}

} // namespace detail

// ---------------------------------------------------------------- approx

struct ApproxOutcome {
    RootQuery query;
    IterationConfig cfg;
    SignConvention convention = SignConvention::Plus;
    IterationTrace trace;
};

inline std::string render_approx(const ApproxOutcome& o, OutputFormat format) {
    const bool minus = o.convention == SignConvention::Minus;
    if (format == OutputFormat::Csv) {
        std::string out = "n,c_n\n";
        for (size_t i = 0; i < o.trace.iterates.size(); ++i)
            out += std::to_string(i + 1) + "," + detail::csv_number(o.trace.iterates[i]) + "\n";
        return out;
    }
    if (format == OutputFormat::Json) {
        std::ostringstream in;
        in << "{\"x\":" << detail::json_number(o.query.radicand) << ",\"d\":" << o.query.degree
           << ",\"b\":" << detail::json_number(o.cfg.offset)
           << ",\"c1\":" << detail::json_number(o.cfg.start)
           << ",\"tol\":" << detail::json_number(o.cfg.tol) << ",\"max_iter\":" << o.cfg.max_iter
           << ",\"max_restarts\":" << o.cfg.max_restarts
           << ",\"zero_guard\":" << detail::json_number(o.cfg.zero_guard)
           << ",\"convention\":\"" << (minus ? "minus" : "plus") << "\"}";
        std::ostringstream res;
        res << "{\"iterates\":[";
        for (size_t i = 0; i < o.trace.iterates.size(); ++i) {
            if (i) res << ",";
            res << detail::json_number(o.trace.iterates[i]);
        }
        res << "],\"verdict\":\"" << verdict_name(o.trace.verdict)
            << "\",\"root_estimate\":" << detail::json_opt_number(o.trace.root_estimate)
            << ",\"residual\":" << detail::json_number(o.trace.residual)
            << ",\"restarts_used\":" << o.trace.restarts_used << "}";
        return detail::json_envelope("approx", in.str(), res.str());
    }

    std::ostringstream out;
    out << "offset fixed-point iteration: x = " << format_display(o.query.radicand)
        << ", d = " << o.query.degree << ", b = " << format_display(o.cfg.offset)
        << ", c1 = " << format_display(o.cfg.start) << ", tol = " << format_display(o.cfg.tol)
        << "\n";
    out << "root form: b/2 " << (minus ? "-" : "+") << " c\n\n";
    out << detail::pad("n", 6) << "c_n\n";
    for (size_t i = 0; i < o.trace.iterates.size(); ++i)
        out << detail::pad(std::to_string(i + 1), 6) << format_display(o.trace.iterates[i]) << "\n";
    out << "\n";
    if (o.trace.root_estimate)
        out << "root estimate: " << format_sig17(*o.trace.root_estimate) << "\n";
    out << "verdict: " << verdict_name(o.trace.verdict)
        << "   residual: " << format_display(o.trace.residual)
        << "   restarts: " << o.trace.restarts_used << "\n";
    return out.str();
}

// ------------------------------------------------------------- stability

struct StabilityOutcome {
    RootQuery query;
    std::optional<StabilityReport> report;           // when b was given (or d >= 3)
    std::optional<std::array<RegimeRow, 7>> table;   // d = 2 regime sweep
};

inline std::string render_stability(const StabilityOutcome& o, OutputFormat format) {
    if (o.table) {
        if (format == OutputFormat::Csv) {
            std::string out = "regime,sample_b,c_minus,c_plus\n";
            for (const auto& row : *o.table)
                out += std::string(regime_label(row.regime)) + "," +
                       detail::csv_number(row.sample_b) + "," + stability_class_name(row.c_minus) +
                       "," + stability_class_name(row.c_plus) + "\n";
            return out;
        }
        if (format == OutputFormat::Json) {
            std::ostringstream in;
            in << "{\"x\":" << detail::json_number(o.query.radicand) << ",\"d\":" << o.query.degree
               << "}";
            std::ostringstream res;
            res << "{\"regime_table\":[";
            for (size_t i = 0; i < o.table->size(); ++i) {
                const auto& row = (*o.table)[i];
                if (i) res << ",";
                res << "{\"regime\":\"" << regime_label(row.regime)
                    << "\",\"sample_b\":" << detail::json_number(row.sample_b) << ",\"c_minus\":\""
                    << stability_class_name(row.c_minus) << "\",\"c_plus\":\""
                    << stability_class_name(row.c_plus) << "\"}";
            }
            res << "]}";
            return detail::json_envelope("stability", in.str(), res.str());
        }
        std::ostringstream out;
        out << "stability of the d = 2 offset map at x = " << format_display(o.query.radicand)
            << "\nfixed points: c- = b/2 - sqrt(x), c+ = b/2 + sqrt(x)\n\n";
        out << detail::pad("regime", 22) << detail::pad("sample b", 16) << detail::pad("c-", 14)
            << "c+\n";
        for (const auto& row : *o.table)
            out << detail::pad(regime_label(row.regime), 22)
                << detail::pad(format_display(row.sample_b), 16)
                << detail::pad(stability_class_name(row.c_minus), 14)
                << stability_class_name(row.c_plus) << "\n";
        return out.str();
    }

    const StabilityReport& rep = *o.report;
    if (format == OutputFormat::Csv) {
        std::string out = "which,location,derivative_magnitude,class\n";
        for (const auto& fp : rep.fixed_points)
            out += std::string(fixed_point_label_name(fp.which)) + "," +
                   detail::csv_number(fp.location) + "," +
                   (std::isfinite(fp.derivative_magnitude)
                        ? detail::csv_number(fp.derivative_magnitude)
                        : std::string("inf")) +
                   "," + stability_class_name(fp.cls) + "\n";
        return out;
    }
    if (format == OutputFormat::Json) {
        std::ostringstream in;
        in << "{\"x\":" << detail::json_number(rep.query.radicand) << ",\"d\":" << rep.query.degree
           << ",\"b\":" << detail::json_number(rep.b) << "}";
        std::ostringstream res;
        res << "{\"fixed_points\":[";
        for (size_t i = 0; i < rep.fixed_points.size(); ++i) {
            const auto& fp = rep.fixed_points[i];
            if (i) res << ",";
            res << "{\"which\":\"" << fixed_point_label_name(fp.which)
                << "\",\"location\":" << detail::json_number(fp.location)
                << ",\"derivative_magnitude\":" << detail::json_number(fp.derivative_magnitude)
                << ",\"class\":\"" << stability_class_name(fp.cls) << "\"}";
        }
        res << "],\"regime\":";
        if (rep.regime)
            res << "\"" << regime_label(*rep.regime) << "\"";
        else
            res << "null";
        res << "}";
        return detail::json_envelope("stability", in.str(), res.str());
    }
    std::ostringstream out;
    out << "fixed points of the offset map: x = " << format_display(rep.query.radicand)
        << ", d = " << rep.query.degree << ", b = " << format_display(rep.b) << "\n\n";
    out << detail::pad("which", 10) << detail::pad("location", 22) << detail::pad("|f'|", 16)
        << "class\n";
    for (const auto& fp : rep.fixed_points)
        out << detail::pad(fixed_point_label_name(fp.which), 10)
            << detail::pad(format_display(fp.location), 22)
            << detail::pad(std::isfinite(fp.derivative_magnitude)
                               ? format_display(fp.derivative_magnitude)
                               : "inf",
                           16)
            << stability_class_name(fp.cls) << "\n";
    if (rep.regime) out << "\nregime: " << regime_label(*rep.regime) << "\n";
    return out.str();
}

// ------------------------------------------------------------------ scan

struct ScanOutcome {
    ScanResult result;
    IterationConfig cfg_template;
    double b_min = 0.0;
    double b_max = 0.0;
    int steps = 0;
    std::optional<double> threshold; // b^d/x at the least positive convergent b
};

/// The per-b rows (the whole payload in csv mode).
inline std::string render_scan_rows_csv(const ScanResult& r) {
    std::string out = "b,verdict,root_estimate,residual\n";
    for (size_t i = 0; i < r.grid.size(); ++i)
        out += detail::csv_number(r.grid[i]) + "," + verdict_name(r.verdicts[i]) + "," +
               detail::csv_opt_number(r.estimates[i]) + "," + detail::csv_number(r.residuals[i]) +
               "\n";
    return out;
}

/// Interval list, threshold and ratio in a short human-readable block.
inline std::string render_scan_summary(const ScanOutcome& o) {
    std::ostringstream out;
    out << "converged-correct intervals:";
    if (o.result.intervals.empty()) out << " none";
    out << "\n";
    for (const auto& iv : o.result.intervals)
        out << "  [" << format_display(iv.lo) << ", " << format_display(iv.hi) << "]\n";
    if (o.result.least_positive_b) {
        out << "least positive convergent b: " << format_sig17(*o.result.least_positive_b) << "\n";
        if (o.threshold) out << "threshold ratio b^d/x: " << format_sig17(*o.threshold) << "\n";
    } else {
        out << "least positive convergent b: none found\n";
    }
    return out.str();
}

inline std::string render_scan(const ScanOutcome& o, OutputFormat format) {
    if (format == OutputFormat::Csv) return render_scan_rows_csv(o.result);
    if (format == OutputFormat::Json) {
        std::ostringstream in;
        in << "{\"x\":" << detail::json_number(o.result.query.radicand)
           << ",\"d\":" << o.result.query.degree << ",\"b_min\":" << detail::json_number(o.b_min)
           << ",\"b_max\":" << detail::json_number(o.b_max) << ",\"steps\":" << o.steps
           << ",\"c1\":" << detail::json_number(o.cfg_template.start)
           << ",\"tol\":" << detail::json_number(o.cfg_template.tol)
           << ",\"max_iter\":" << o.cfg_template.max_iter << "}";
        std::ostringstream res;
        res << "{\"per_b\":[";
        for (size_t i = 0; i < o.result.grid.size(); ++i) {
            if (i) res << ",";
            res << "{\"b\":" << detail::json_number(o.result.grid[i]) << ",\"verdict\":\""
                << verdict_name(o.result.verdicts[i])
                << "\",\"root_estimate\":" << detail::json_opt_number(o.result.estimates[i])
                << ",\"residual\":" << detail::json_number(o.result.residuals[i]) << "}";
        }
        res << "],\"intervals\":[";
        for (size_t i = 0; i < o.result.intervals.size(); ++i) {
            if (i) res << ",";
            res << "{\"lo\":" << detail::json_number(o.result.intervals[i].lo)
                << ",\"hi\":" << detail::json_number(o.result.intervals[i].hi) << "}";
        }
        res << "],\"least_positive_b\":" << detail::json_opt_number(o.result.least_positive_b)
            << ",\"threshold_ratio\":" << detail::json_opt_number(o.threshold) << "}";
        return detail::json_envelope("scan", in.str(), res.str());
    }

    std::ostringstream out;
    out << "scan: x = " << format_display(o.result.query.radicand) << ", d = " << o.result.query.degree
        << ", b in [" << format_display(o.b_min) << ", " << format_display(o.b_max) << "], "
        << o.steps << " points (c1 = " << format_display(o.cfg_template.start)
        << ", tol = " << format_display(o.cfg_template.tol)
        << ", max-iter = " << o.cfg_template.max_iter << ")\n\n";
    size_t counts[5] = {0, 0, 0, 0, 0};
    for (Verdict v : o.result.verdicts) ++counts[static_cast<size_t>(v)];
    out << "verdicts:";
    const Verdict order[] = {Verdict::ConvergedCorrect, Verdict::ConvergedWrong, Verdict::Diverged,
                             Verdict::MaxIterExceeded, Verdict::ZeroDivisorExhausted};
    for (Verdict v : order)
        if (counts[static_cast<size_t>(v)] > 0)
            out << " " << verdict_name(v) << " " << counts[static_cast<size_t>(v)];
    out << "\n";
    out << render_scan_summary(o);
    return out.str();
}

// --------------------------------------------------------------- compare

struct CompareColumn {
    BaselineMethod method;
    IterationTrace trace;
    std::optional<ConvergenceEstimate> estimate; // absent when the trace is too short
};

struct CompareOutcome {
    RootQuery query;
    double b = 0.0;
    double x1 = 1.0;
    double true_root = 0.0;
    std::vector<CompareColumn> columns;
};

namespace detail {

inline std::optional<double> compare_error(const CompareOutcome& o, size_t method_index, size_t n) {
    const auto& it = o.columns[method_index].trace.iterates;
    if (n >= it.size()) return std::nullopt;
    return std::abs(it[n] - o.true_root);
}

inline const CompareColumn* find_method(const CompareOutcome& o, BaselineMethod m) {
    for (const auto& col : o.columns)
        if (col.method == m) return &col;
    return nullptr;
}

} // namespace detail

inline std::string render_compare(const CompareOutcome& o, OutputFormat format) {
    size_t rows = 0;
    for (const auto& col : o.columns) rows = std::max(rows, col.trace.iterates.size());

    if (format == OutputFormat::Csv) {
        // Fixed column set; methods that did not run leave their cells empty.
        const BaselineMethod order[] = {BaselineMethod::OffsetFixedPoint,
                                        BaselineMethod::NewtonRaphson, BaselineMethod::Babylonian,
                                        BaselineMethod::Halley};
        std::string out = "n,err_offset,err_newton,err_babylonian,err_halley\n";
        for (size_t n = 0; n < rows; ++n) {
            out += std::to_string(n + 1);
            for (BaselineMethod m : order) {
                out += ",";
                if (const auto* col = detail::find_method(o, m)) {
                    const size_t idx = static_cast<size_t>(col - o.columns.data());
                    out += detail::csv_opt_number(detail::compare_error(o, idx, n));
                }
            }
            out += "\n";
        }
        return out;
    }
    if (format == OutputFormat::Json) {
        std::ostringstream in;
        in << "{\"x\":" << detail::json_number(o.query.radicand) << ",\"d\":" << o.query.degree
           << ",\"b\":" << detail::json_number(o.b) << ",\"x1\":" << detail::json_number(o.x1)
           << "}";
        std::ostringstream res;
        res << "{\"true_root\":" << detail::json_number(o.true_root) << ",\"methods\":[";
        for (size_t i = 0; i < o.columns.size(); ++i) {
            const auto& col = o.columns[i];
            if (i) res << ",";
            res << "{\"method\":\"" << baseline_method_name(col.method) << "\",\"verdict\":\""
                << verdict_name(col.trace.verdict)
                << "\",\"iterations\":" << col.trace.iterates.size() << ",\"root_estimate\":"
                << detail::json_opt_number(col.trace.root_estimate) << ",\"errors\":[";
            for (size_t n = 0; n < col.trace.iterates.size(); ++n) {
                if (n) res << ",";
                res << detail::json_number(std::abs(col.trace.iterates[n] - o.true_root));
            }
            res << "],\"order\":"
                << (col.estimate ? detail::json_number(col.estimate->order) : "null")
                << ",\"rate\":" << (col.estimate ? detail::json_number(col.estimate->rate) : "null")
                << "}";
        }
        res << "]}";
        return detail::json_envelope("compare", in.str(), res.str());
    }

    std::ostringstream out;
    out << "comparison: x = " << format_display(o.query.radicand) << ", d = " << o.query.degree
        << ", b = " << format_display(o.b) << ", start = " << format_display(o.x1)
        << "   (absolute error per iteration)\n\n";
    out << detail::pad("n", 6);
    for (const auto& col : o.columns) out << detail::pad(baseline_method_name(col.method), 19);
    out << "\n";
    for (size_t n = 0; n < rows; ++n) {
        out << detail::pad(std::to_string(n + 1), 6);
        for (size_t i = 0; i < o.columns.size(); ++i) {
            const auto err = detail::compare_error(o, i, n);
            out << detail::pad(err ? format_display(*err) : "", 19);
        }
        out << "\n";
    }
    out << "\n" << detail::pad("method", 12) << detail::pad("verdict", 22)
        << detail::pad("iters", 8) << detail::pad("order", 16) << "rate\n";
    for (const auto& col : o.columns) {
        out << detail::pad(baseline_method_name(col.method), 12)
            << detail::pad(verdict_name(col.trace.verdict), 22)
            << detail::pad(std::to_string(col.trace.iterates.size()), 8);
        if (col.estimate) {
            out << detail::pad(format_display(col.estimate->order), 16);
            // The per-step ratio only describes order-1 sequences.
            if (!std::isnan(col.estimate->rate) && std::abs(col.estimate->order - 1.0) <= 0.2)
                out << format_display(col.estimate->rate);
        }
        out << "\n";
    }
    return out.str();
}

// -------------------------------------------------------------------- cf

struct CfOutcome {
    RootQuery query;
    GeneralizedCF gcf;
    std::vector<double> values; // truncation values for depth 1..gcf.depth
    bool equivalence = false;
    double limit = 0.0; // b/2 - sqrt(x)
};

inline std::string render_cf(const CfOutcome& o, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        std::string out = "depth,value\n";
        for (size_t i = 0; i < o.values.size(); ++i)
            out += std::to_string(i + 1) + "," + detail::csv_number(o.values[i]) + "\n";
        return out;
    }
    if (format == OutputFormat::Json) {
        std::ostringstream in;
        in << "{\"x\":" << detail::json_number(o.query.radicand)
           << ",\"b\":" << detail::json_number(-o.gcf.partial_denominator)
           << ",\"depth\":" << o.gcf.depth << "}";
        std::ostringstream res;
        res << "{\"partial_numerator\":" << detail::json_number(o.gcf.partial_numerator)
            << ",\"partial_denominator\":" << detail::json_number(o.gcf.partial_denominator)
            << ",\"values\":[";
        for (size_t i = 0; i < o.values.size(); ++i) {
            if (i) res << ",";
            res << detail::json_number(o.values[i]);
        }
        res << "],\"iteration_equivalence\":" << (o.equivalence ? "true" : "false")
            << ",\"limit\":" << detail::json_number(o.limit) << "}";
        return detail::json_envelope("cf", in.str(), res.str());
    }

    std::ostringstream out;
    out << "generalized continued fraction: x = " << format_display(o.query.radicand)
        << ", b = " << format_display(-o.gcf.partial_denominator) << ", depth = " << o.gcf.depth
        << "\n";
    out << "partial numerator " << format_display(o.gcf.partial_numerator)
        << ", partial denominator " << format_display(o.gcf.partial_denominator) << "\n\n";
    out << gcf_compact(o.gcf) << "\n\n";
    out << detail::pad("depth", 8) << "value\n";
    // Long expansions print a thinned table: every power of two and the tail.
    const size_t n = o.values.size();
    for (size_t i = 0; i < n; ++i) {
        const size_t depth = i + 1;
        const bool show = n <= 24 || depth <= 8 || depth == n || (depth & (depth - 1)) == 0;
        if (!show) continue;
        out << detail::pad(std::to_string(depth), 8) << format_sig17(o.values[i]) << "\n";
    }
    out << "\nlimit b/2 - sqrt(x) = " << format_sig17(o.limit) << "\n";
    out << "iteration equivalence (all k <= " << o.gcf.depth << "): "
        << (o.equivalence ? "yes" : "no") << "\n";
    return out.str();
}

} // namespace rootiter
