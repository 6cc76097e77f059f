#include "rootiter/report.hpp"

#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>

using namespace rootiter;
using nlohmann::json;

namespace {

ApproxOutcome golden_approx() {
    ApproxOutcome o;
    o.query = RootQuery{5.0, 2};
    o.cfg.offset = 4.0;
    o.cfg.start = 10.0;
    o.cfg.tol = 1e-9;
    o.convention = SignConvention::Minus;
    o.trace = run_iteration(o.query, o.cfg, o.convention);
    return o;
}

} // namespace

TEST_CASE("seventeen significant digits round-trip doubles bit-exactly") {
    auto rng = testutil::seeded_rng(43);
    std::vector<double> values = {1.0 / 3.0,       0.1,   1e300, 5e-324, -1.0 / 7.0,
                                  2.0 - std::sqrt(5.0), 1e-9,  0.25,  123456789.123};
    for (int i = 0; i < 200; ++i)
        values.push_back(std::ldexp(testutil::uniform(rng, -1.0, 1.0),
                                    static_cast<int>(testutil::uniform(rng, -300.0, 300.0))));
    for (double v : values) {
        const std::string s = format_sig17(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("approx renders the pinned trace CSV schema") {
    const std::string csv = render_approx(golden_approx(), OutputFormat::Csv);
    CHECK(csv.rfind("n,c_n\n", 0) == 0);
    CHECK(csv.find("\n1,10\n") != std::string::npos);
    CHECK(csv.find("2,0.16666666666666666\n") != std::string::npos);
}

TEST_CASE("approx json carries the envelope and bit-exact numbers") {
    const ApproxOutcome o = golden_approx();
    const std::string text = render_approx(o, OutputFormat::Json);
    const json j = json::parse(text);
    CHECK(j["command"] == "approx");
    CHECK(j["version"] == kVersion);
    CHECK(j["inputs"]["x"].get<double>() == 5.0);
    CHECK(j["inputs"]["d"].get<int>() == 2);
    CHECK(j["inputs"]["convention"] == "minus");
    REQUIRE(j["results"]["iterates"].size() == o.trace.iterates.size());
    for (size_t i = 0; i < o.trace.iterates.size(); ++i)
        CHECK(j["results"]["iterates"][i].get<double>() == o.trace.iterates[i]);
    CHECK(j["results"]["root_estimate"].get<double>() == *o.trace.root_estimate);
    CHECK(j["results"]["residual"].get<double>() == o.trace.residual);
    CHECK(j["results"]["verdict"] == "converged_correct");
}

TEST_CASE("scan renders the pinned per-b CSV schema") {
    IterationConfig tmpl;
    tmpl.start = 1.0;
    tmpl.max_iter = 2000;
    ScanOutcome o;
    o.cfg_template = tmpl;
    o.b_min = 0.5;
    o.b_max = 10.0;
    o.steps = 10;
    o.result = scan_b(RootQuery{5.0, 2}, 0.5, 10.0, 10, tmpl);
    if (o.result.least_positive_b)
        o.threshold = threshold_ratio(*o.result.least_positive_b, o.result.query);

    const std::string csv = render_scan(o, OutputFormat::Csv);
    CHECK(csv.rfind("b,verdict,root_estimate,residual\n", 0) == 0);
    CHECK(csv.find("converged_correct") != std::string::npos);

    const json j = json::parse(render_scan(o, OutputFormat::Json));
    CHECK(j["command"] == "scan");
    REQUIRE(j["results"]["per_b"].size() == o.result.grid.size());
    for (size_t i = 0; i < o.result.grid.size(); ++i) {
        CHECK(j["results"]["per_b"][i]["b"].get<double>() == o.result.grid[i]);
        CHECK(j["results"]["per_b"][i]["root_estimate"].get<double>() == *o.result.estimates[i]);
    }
    CHECK(j["results"]["least_positive_b"].get<double>() == *o.result.least_positive_b);
    CHECK(j["results"]["intervals"].size() == o.result.intervals.size());
}

TEST_CASE("compare renders the pinned error-column CSV schema") {
    CompareOutcome o;
    o.query = RootQuery{7.0, 2};
    o.b = 4.0;
    o.x1 = 1.0;
    o.true_root = std::sqrt(7.0);
    for (BaselineMethod m : {BaselineMethod::OffsetFixedPoint, BaselineMethod::NewtonRaphson,
                             BaselineMethod::Babylonian, BaselineMethod::Halley}) {
        CompareColumn col;
        col.method = m;
        col.trace = run_baseline(m, o.query, 1.0, 1e-10, 100,
                                 m == BaselineMethod::OffsetFixedPoint ? std::optional<double>(4.0)
                                                                       : std::nullopt);
        try {
            col.estimate = estimate_convergence(col.trace, o.true_root);
        } catch (const insufficient_data_error&) {
        }
        o.columns.push_back(std::move(col));
    }

    const std::string csv = render_compare(o, OutputFormat::Csv);
    CHECK(csv.rfind("n,err_offset,err_newton,err_babylonian,err_halley\n", 0) == 0);

    const json j = json::parse(render_compare(o, OutputFormat::Json));
    CHECK(j["command"] == "compare");
    CHECK(j["results"]["true_root"].get<double>() == o.true_root);
    REQUIRE(j["results"]["methods"].size() == 4);
    CHECK(j["results"]["methods"][0]["method"] == "offset");
    CHECK(j["results"]["methods"][1]["order"].get<double>() > 1.5);

    const std::string text = render_compare(o, OutputFormat::Text);
    CHECK(text.find("newton") != std::string::npos);
    CHECK(text.find("babylonian") != std::string::npos);
}

TEST_CASE("compare CSV leaves the babylonian column empty beyond d = 2") {
    CompareOutcome o;
    o.query = RootQuery{1250.0, 3};
    o.b = 70.0;
    o.x1 = 1.0;
    o.true_root = std::cbrt(1250.0);
    for (BaselineMethod m : {BaselineMethod::OffsetFixedPoint, BaselineMethod::NewtonRaphson,
                             BaselineMethod::Halley}) {
        CompareColumn col;
        col.method = m;
        col.trace = run_baseline(m, o.query, 1.0, 1e-10, 500,
                                 m == BaselineMethod::OffsetFixedPoint ? std::optional<double>(70.0)
                                                                       : std::nullopt);
        o.columns.push_back(std::move(col));
    }
    const std::string csv = render_compare(o, OutputFormat::Csv);
    CHECK(csv.rfind("n,err_offset,err_newton,err_babylonian,err_halley\n", 0) == 0);
    const size_t line1 = csv.find('\n') + 1;
    const std::string first_row = csv.substr(line1, csv.find('\n', line1) - line1);
    // n, offset error, newton error, empty babylonian cell, halley error
    CHECK(first_row.find(",,") != std::string::npos);
}

TEST_CASE("cf renders coefficients, values and the equivalence flag") {
    CfOutcome o;
    o.query = RootQuery{5.0, 2};
    o.gcf = build_gcf(5.0, 4.0, 10);
    o.values = gcf_truncation_values(o.gcf);
    o.equivalence = gcf_iteration_equivalence(5.0, 4.0, 10);
    o.limit = 4.0 / 2.0 - std::sqrt(5.0);

    const std::string csv = render_cf(o, OutputFormat::Csv);
    CHECK(csv.rfind("depth,value\n", 0) == 0);
    CHECK(csv.find("1,-0.25\n") != std::string::npos);

    const json j = json::parse(render_cf(o, OutputFormat::Json));
    CHECK(j["command"] == "cf");
    CHECK(j["results"]["partial_numerator"].get<double>() == 1.0);
    CHECK(j["results"]["partial_denominator"].get<double>() == -4.0);
    CHECK(j["results"]["iteration_equivalence"].get<bool>());
    REQUIRE(j["results"]["values"].size() == 10);
    CHECK(j["results"]["values"][9].get<double>() == o.values[9]);
}

TEST_CASE("stability renders both report shapes") {
    StabilityOutcome table;
    table.query = RootQuery{7.0, 2};
    table.table = regime_table(7.0);
    const std::string csv = render_stability(table, OutputFormat::Csv);
    CHECK(csv.rfind("regime,sample_b,c_minus,c_plus\n", 0) == 0);
    CHECK(csv.find("superstable") != std::string::npos);
    const json jt = json::parse(render_stability(table, OutputFormat::Json));
    REQUIRE(jt["results"]["regime_table"].size() == 7);
    CHECK(jt["results"]["regime_table"][5]["c_minus"] == "superstable");

    StabilityOutcome report;
    report.query = RootQuery{7.0, 2};
    report.report = stability_report(report.query, 4.0);
    const json jr = json::parse(render_stability(report, OutputFormat::Json));
    CHECK(jr["results"]["fixed_points"].size() == 2);
    CHECK(jr["results"]["regime"] == "0 < b < 2*sqrt(x)");
    const std::string text = render_stability(report, OutputFormat::Text);
    CHECK(text.find("c_minus") != std::string::npos);
    CHECK(text.find("stable") != std::string::npos);
}

TEST_CASE("rendering is deterministic") {
    const ApproxOutcome o = golden_approx();
    for (OutputFormat f : {OutputFormat::Text, OutputFormat::Csv, OutputFormat::Json})
        CHECK(render_approx(o, f) == render_approx(o, f));
}

TEST_CASE("infinite derivative magnitudes become null in json") {
    StabilityOutcome o;
    o.query = RootQuery{9.0, 2};
    o.report = stability_report(o.query, 6.0); // c+ sits on the pole
    const json j = json::parse(render_stability(o, OutputFormat::Json));
    CHECK(j["results"]["fixed_points"][1]["derivative_magnitude"].is_null());
}
