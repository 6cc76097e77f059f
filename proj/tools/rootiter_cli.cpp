// Command-line front end: approx, stability, scan, compare, cf.
//
// Exit codes: 0 on success (for approx/compare: the run converged to the
// principal root), 1 on argument errors, 2 when a run did not converge.

#include "rootiter/rootiter.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace rootiter;

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
    file << payload;
}

// Digit-count ballpark for b when the user gives none: an n-digit integer
// has a d-th root of roughly ceil(n/d) digits, so take twice the geometric
// midpoint of that digit range as the offset.
double guess_offset(double x, int d) {
    const int digits = x >= 1.0 ? static_cast<int>(std::floor(std::log10(x))) + 1 : 1;
    const int root_digits = std::max(1, (digits + d - 1) / d);
    return 2.0 * std::pow(10.0, static_cast<double>(root_digits) - 0.5);
}

struct CommandValues {
    double x = 0.0;
    int d = 2;
    std::optional<double> b;
    std::optional<double> c1;
    double tol = kDefaultTol;
    int max_iter = kDefaultMaxIter;
    double b_min = 0.0;
    double b_max = 0.0;
    int steps = 0;
    int depth = 30;
    std::string format = "text";
    std::string out_path;
};

void add_format_options(CLI::App* cmd, CommandValues& v) {
    cmd->add_option("--format", v.format, "output format: text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", v.out_path, "write the report to this file instead of stdout");
}

int run_approx(const CommandValues& v) {
    ApproxOutcome o;
    o.query = RootQuery{v.x, v.d};
    o.convention = v.d == 2 ? SignConvention::Minus : SignConvention::Plus;
    o.cfg.offset = v.b ? *v.b : guess_offset(v.x, v.d);
    o.cfg.start = v.c1 ? *v.c1 : 0.0;
    o.cfg.tol = v.tol;
    o.cfg.max_iter = v.max_iter;
    if (!v.b)
        std::cerr << "note: no b given; digit-count guess b = " << format_display(o.cfg.offset)
                  << "\n";
    o.trace = run_iteration(o.query, o.cfg, o.convention);
    emit(render_approx(o, parse_output_format(v.format)), v.out_path);
    return o.trace.verdict == Verdict::ConvergedCorrect ? 0 : 2;
}

int run_stability(const CommandValues& v) {
    StabilityOutcome o;
    o.query = RootQuery{v.x, v.d};
    o.query.validate();
    if (!v.b && v.d >= 3)
        throw std::invalid_argument("stability for d >= 3 needs an explicit --b");
    if (v.b)
        o.report = stability_report(o.query, *v.b);
    else
        o.table = regime_table(v.x);
    emit(render_stability(o, parse_output_format(v.format)), v.out_path);
    return 0;
}

int run_scan(const CommandValues& v) {
    ScanOutcome o;
    o.cfg_template.start = v.c1 ? *v.c1 : 1.0;
    o.cfg_template.tol = v.tol;
    o.cfg_template.max_iter = v.max_iter;
    o.b_min = v.b_min;
    o.b_max = v.b_max;
    o.steps = v.steps;
    o.result = scan_b(RootQuery{v.x, v.d}, v.b_min, v.b_max, v.steps, o.cfg_template);
    if (o.result.least_positive_b)
        o.threshold = threshold_ratio(*o.result.least_positive_b, o.result.query);
    const OutputFormat format = parse_output_format(v.format);
    emit(render_scan(o, format), v.out_path);
    if (format == OutputFormat::Csv) std::cerr << render_scan_summary(o); // keep the data file clean
    return 0;
}

int run_compare(const CommandValues& v) {
    CompareOutcome o;
    o.query = RootQuery{v.x, v.d};
    o.query.validate();
    o.b = v.b ? *v.b : guess_offset(v.x, v.d);
    if (!v.b)
        std::cerr << "note: no b given; digit-count guess b = " << format_display(o.b) << "\n";
    o.true_root = nth_root(v.x, v.d);
    // Comparable starts: every method begins at the same root guess.
    o.x1 = v.c1 ? (v.d == 2 ? o.b / 2.0 - *v.c1 : o.b / 2.0 + *v.c1) : 1.0;

    std::vector<BaselineMethod> methods = {BaselineMethod::OffsetFixedPoint,
                                           BaselineMethod::NewtonRaphson};
    if (v.d == 2) methods.push_back(BaselineMethod::Babylonian);
    methods.push_back(BaselineMethod::Halley);
    for (BaselineMethod m : methods) {
        CompareColumn col;
        col.method = m;
        col.trace = run_baseline(m, o.query, o.x1, v.tol, v.max_iter,
                                 m == BaselineMethod::OffsetFixedPoint
                                     ? std::optional<double>(o.b)
                                     : std::nullopt);
        try {
            col.estimate = estimate_convergence(col.trace, o.true_root);
        } catch (const insufficient_data_error&) {
        }
        o.columns.push_back(std::move(col));
    }
    emit(render_compare(o, parse_output_format(v.format)), v.out_path);
    return o.columns.front().trace.verdict == Verdict::ConvergedCorrect ? 0 : 2;
}

int run_cf(const CommandValues& v) {
    if (v.d != 2) throw std::invalid_argument("the continued fraction is defined for d = 2 only");
    if (!v.b) throw std::invalid_argument("cf needs an explicit --b");
    CfOutcome o;
    o.query = RootQuery{v.x, 2};
    o.gcf = build_gcf(v.x, *v.b, v.depth);
    o.values = gcf_truncation_values(o.gcf);
    o.equivalence = gcf_iteration_equivalence(v.x, *v.b, v.depth);
    o.limit = *v.b / 2.0 - std::sqrt(v.x);
    emit(render_cf(o, parse_output_format(v.format)), v.out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"root approximation by offset fixed-point iteration"};
    app.set_version_flag("--version", std::string("rootiter ") + rootiter::kVersion);
    app.require_subcommand(1);

    CommandValues v;

    CLI::App* approx = app.add_subcommand("approx", "approximate the d-th root of x");
    approx->add_option("--x", v.x, "radicand (positive real)")->required();
    approx->add_option("--d", v.d, "root degree")->capture_default_str();
    approx->add_option("--b", v.b, "offset parameter (digit-count guess when omitted)");
    approx->add_option("--c1", v.c1, "initial iterate (default 0)");
    approx->add_option("--tol", v.tol, "step-size tolerance")->capture_default_str();
    approx->add_option("--max-iter", v.max_iter, "iteration budget")->capture_default_str();
    add_format_options(approx, v);

    CLI::App* stability = app.add_subcommand("stability", "classify the fixed points of the map");
    stability->add_option("--x", v.x, "radicand (positive real)")->required();
    stability->add_option("--d", v.d, "root degree")->capture_default_str();
    stability->add_option("--b", v.b, "offset; omit for the full d = 2 regime table");
    add_format_options(stability, v);

    CLI::App* scan = app.add_subcommand("scan", "sweep b and map where the iteration works");
    scan->add_option("--x", v.x, "radicand (positive real)")->required();
    scan->add_option("--d", v.d, "root degree")->capture_default_str();
    scan->add_option("--b-min", v.b_min, "lower end of the b grid")->required();
    scan->add_option("--b-max", v.b_max, "upper end of the b grid")->required();
    scan->add_option("--steps", v.steps, "number of grid points")->required();
    scan->add_option("--c1", v.c1, "start value per run (default 1)");
    scan->add_option("--tol", v.tol, "step-size tolerance")->capture_default_str();
    scan->add_option("--max-iter", v.max_iter,
                     "iteration budget per run (default " +
                         std::to_string(kDefaultScanMaxIter) + ")");
    add_format_options(scan, v);

    CLI::App* compare = app.add_subcommand("compare", "race the offset method against baselines");
    compare->add_option("--x", v.x, "radicand (positive real)")->required();
    compare->add_option("--d", v.d, "root degree")->capture_default_str();
    compare->add_option("--b", v.b, "offset for the fixed-point method");
    compare->add_option("--c1", v.c1, "offset-method start (default: comparable root guess 1)");
    compare->add_option("--tol", v.tol, "step-size tolerance")->capture_default_str();
    compare->add_option("--max-iter", v.max_iter, "iteration budget")->capture_default_str();
    add_format_options(compare, v);

    CLI::App* cf = app.add_subcommand("cf", "show the induced generalized continued fraction");
    cf->add_option("--x", v.x, "radicand (positive real)")->required();
    cf->add_option("--d", v.d, "root degree (must be 2)")->capture_default_str();
    cf->add_option("--b", v.b, "offset parameter");
    cf->add_option("--depth", v.depth, "truncation depth")->capture_default_str();
    add_format_options(cf, v);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (app.got_subcommand(scan) && scan->count("--max-iter") == 0)
        v.max_iter = kDefaultScanMaxIter;

    try {
        if (app.got_subcommand(approx)) return run_approx(v);
        if (app.got_subcommand(stability)) return run_stability(v);
        if (app.got_subcommand(scan)) return run_scan(v);
        if (app.got_subcommand(compare)) return run_compare(v);
        if (app.got_subcommand(cf)) return run_cf(v);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
