#include "rootiter/iteration.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace rootiter;
using testutil::Frac;

TEST_CASE("sqrt_step reproduces the worked values") {
    // (5 - 16/4) = 1 and 10 - 4 = 6 are exact, so the quotient is fl(1/6).
    CHECK(sqrt_step(10.0, 5.0, 4.0) == 1.0 / 6.0);

    // Exact rational continuation: 1/(1/6 - 4) = -6/23.
    Frac c{10, 1};
    c = testutil::sqrt5_b4_step(c);
    REQUIRE(c.p == 1);
    REQUIRE(c.q == 6);
    c = testutil::sqrt5_b4_step(c);
    REQUIRE(c.p == -6);
    REQUIRE(c.q == 23);
    CHECK(sqrt_step(1.0 / 6.0, 5.0, 4.0) == doctest::Approx(-6.0 / 23.0).epsilon(1e-15));

    // Perfect square with b = 2 sqrt(x): numerator vanishes.
    CHECK(sqrt_step(0.0, 4.0, 4.0) == 0.0);

    CHECK_THROWS_AS(sqrt_step(4.0 + 1e-13, 5.0, 4.0), zero_divisor_error);
    CHECK_THROWS_AS(sqrt_step(4.0, 5.0, 4.0), zero_divisor_error);
}

TEST_CASE("nth_step evaluates the cancelled divided-difference form") {
    // d = 3: Q(1) = 3*35^2 + 3*35 + 1 = 3781, numerator 1250 - 42875.
    CHECK(nth_step(1.0, 1250.0, 70.0, 3) == -41625.0 / 3781.0);

    // Removable singularity at c = 0.
    CHECK(nth_step(0.0, 5.0, 4.0, 2) == 0.25);
    CHECK(nth_step(0.0, 100.0, 6.0, 5) ==
          doctest::Approx((100.0 - 243.0) / (5.0 * 81.0)).epsilon(1e-15));

    // Even d puts a real root of Q at c = -b (the point b/2 + c = -b/2).
    CHECK_THROWS_AS(nth_step(-6.0, 5.0, 6.0, 4), zero_divisor_error);
}

TEST_CASE("sign-swap identity ties the two d = 2 presentations together") {
    auto rng = testutil::seeded_rng();
    for (int i = 0; i < 1000; ++i) {
        const double x = testutil::log_uniform(rng, 0.5, 1e6);
        const double b = testutil::uniform(rng, -10.0, 10.0) * std::sqrt(x);
        const double c = testutil::uniform(rng, -8.0, 8.0) * std::sqrt(x);
        if (b == 0.0 || std::abs(c - b) < 1e-6 || std::abs(c + b) < 1e-6) continue;
        CHECK(ulp_distance(sqrt_step(c, x, b), -nth_step(-c, x, b, 2)) <= 4);
    }
}

TEST_CASE("the oracle fixed point is a fixed point of nth_step") {
    auto rng = testutil::seeded_rng(7);
    int tested = 0;
    for (int i = 0; tested < 300 && i < 3000; ++i) {
        const double x = testutil::log_uniform(rng, 0.5, 1e6);
        const int d = 2 + static_cast<int>(testutil::uniform(rng, 0.0, 8.0));
        const double t = nth_root(x, d);
        // Positive offsets over the full working range; negative offsets at
        // low degree, where the alternating Q sum stays well conditioned.
        const bool negative = testutil::uniform(rng, 0.0, 1.0) < 0.25 && d <= 4;
        const double u = negative ? testutil::uniform(rng, -1.2, -0.15)
                                  : testutil::uniform(rng, 0.15, 2.5);
        const double b = 2.0 * u * t;
        const double c_star = t - b / 2.0;
        double stepped;
        try {
            stepped = nth_step(c_star, x, b, d);
        } catch (const zero_divisor_error&) {
            continue;
        }
        ++tested;
        CHECK(std::abs(stepped - c_star) <= 1e-12 * (1.0 + std::abs(c_star)));
    }
    CHECK(tested == 300);
}

TEST_CASE("recover_root applies the chosen convention") {
    CHECK(recover_root(-0.23606797, 4.0, SignConvention::Minus) ==
          doctest::Approx(2.23606797).epsilon(1e-12));
    CHECK(recover_root(std::cbrt(1250.0) - 35.0, 70.0, SignConvention::Plus) ==
          doctest::Approx(std::cbrt(1250.0)).epsilon(1e-15));
    CHECK(recover_root(-24.2278, 70.0, SignConvention::Plus) ==
          doctest::Approx(10.7722).epsilon(1e-12));
    CHECK(recover_root(0.0, 4.0, SignConvention::Minus) == 2.0);
}

TEST_CASE("the sqrt(5) run reproduces the worked trace digit for digit") {
    const RootQuery query{5.0, 2};
    IterationConfig cfg;
    cfg.offset = 4.0;
    cfg.start = 10.0;
    cfg.tol = 1e-9;
    const IterationTrace trace = run_iteration(query, cfg, SignConvention::Minus);

    REQUIRE(trace.iterates.size() == 10);
    CHECK(trace.iterates[0] == 10.0);
    CHECK(trace.iterates[1] == 1.0 / 6.0);

    Frac expected{10, 1};
    for (size_t n = 1; n < trace.iterates.size(); ++n) {
        expected = testutil::sqrt5_b4_step(expected);
        CHECK(trace.iterates[n] == doctest::Approx(expected.value()).epsilon(1e-14));
    }

    // The 8-decimal rows the table prints.
    CHECK(std::abs(trace.iterates[3] - -0.23469387) <= 1e-8);
    CHECK(std::abs(trace.iterates[4] - -0.23614457) <= 1e-8);
    CHECK(std::abs(trace.iterates[8] - -0.23606797) <= 1e-8);
    CHECK(std::abs(trace.iterates[9] - -0.23606797) <= 1e-8);

    CHECK(trace.verdict == Verdict::ConvergedCorrect);
    CHECK(trace.restarts_used == 0);
    REQUIRE(trace.root_estimate.has_value());
    CHECK(std::abs(*trace.root_estimate - std::sqrt(5.0)) <= 1e-9);
    CHECK(std::abs(*trace.root_estimate - 2.23606797745) <= 1e-9);
}

TEST_CASE("per-step contraction settles at the map derivative magnitude") {
    const RootQuery query{5.0, 2};
    IterationConfig cfg;
    cfg.offset = 4.0;
    cfg.start = 10.0;
    cfg.tol = 1e-9;
    const IterationTrace trace = run_iteration(query, cfg, SignConvention::Minus);
    const double c_star = 2.0 - std::sqrt(5.0);
    // |f'(c-)| = 1/(2 + sqrt(5))^2
    const double rho = 1.0 / ((2.0 + std::sqrt(5.0)) * (2.0 + std::sqrt(5.0)));
    for (size_t n = 5; n + 1 < trace.iterates.size(); ++n) {
        const double e0 = std::abs(trace.iterates[n] - c_star);
        const double e1 = std::abs(trace.iterates[n + 1] - c_star);
        CHECK(e1 / e0 == doctest::Approx(rho).epsilon(0.10));
    }
}

TEST_CASE("cube roots need the offset on the right side of the bound") {
    const RootQuery query{1250.0, 3};
    for (double c1 : {1.0, 10.0}) {
        IterationConfig cfg;
        cfg.offset = 70.0;
        cfg.start = c1;
        const IterationTrace trace = run_iteration(query, cfg);
        CHECK(trace.verdict == Verdict::ConvergedCorrect);
        REQUIRE(trace.root_estimate.has_value());
        CHECK(std::abs(*trace.root_estimate - std::cbrt(1250.0)) <= 1e-8);
        CHECK(std::abs(*trace.root_estimate - 10.772) <= 5e-4);
    }
    for (double c1 : {1.0, 10.0}) {
        IterationConfig cfg;
        cfg.offset = 7.0;
        cfg.start = c1;
        const IterationTrace trace = run_iteration(query, cfg);
        CHECK(trace.verdict != Verdict::ConvergedCorrect);
    }
}

TEST_CASE("convergence verdicts imply a small recovered-root residual") {
    auto rng = testutil::seeded_rng(11);
    for (int i = 0; i < 50; ++i) {
        const double x = testutil::log_uniform(rng, 0.5, 1e5);
        IterationConfig cfg;
        cfg.offset = testutil::uniform(rng, 0.3, 3.0) * 2.0 * std::sqrt(x);
        cfg.start = testutil::uniform(rng, -3.0, 3.0);
        const IterationTrace trace = run_iteration(RootQuery{x, 2}, cfg);
        if (trace.verdict != Verdict::ConvergedCorrect) continue;
        const double r = *trace.root_estimate;
        CHECK(std::abs(std::pow(r, 2.0) - x) <=
              std::max(1e-8, 100.0 * cfg.tol) * (1.0 + x));
        CHECK(r > 0.0);
    }
}

TEST_CASE("settling on the negative root is converged but wrong") {
    // b < 0 attracts the fixed point that assembles to -sqrt(x).
    IterationConfig cfg;
    cfg.offset = -2.0;
    cfg.start = 1.0;
    const IterationTrace trace = run_iteration(RootQuery{4.0, 2}, cfg);
    CHECK(trace.verdict == Verdict::ConvergedWrong);
    REQUIRE(trace.root_estimate.has_value());
    CHECK(*trace.root_estimate == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(trace.residual <= 1e-8 * 5.0); // it really is a root, just not the principal one
}

TEST_CASE("identical inputs produce bit-identical traces") {
    const RootQuery query{1250.0, 3};
    IterationConfig cfg;
    cfg.offset = 70.0;
    cfg.start = 1.0;
    const IterationTrace a = run_iteration(query, cfg);
    const IterationTrace b = run_iteration(query, cfg);
    REQUIRE(a.iterates.size() == b.iterates.size());
    for (size_t i = 0; i < a.iterates.size(); ++i) CHECK(a.iterates[i] == b.iterates[i]);
    CHECK(a.verdict == b.verdict);
    CHECK(a.root_estimate == b.root_estimate);
}

TEST_CASE("a zero divisor triggers the deterministic restart") {
    const RootQuery query{5.0, 2};
    IterationConfig cfg;
    cfg.offset = 4.0;
    cfg.start = 4.0; // lands exactly on the pole of the minus map
    const IterationTrace trace = run_iteration(query, cfg, SignConvention::Minus);
    CHECK(trace.restarts_used == 1);
    CHECK(trace.iterates[0] == 4.0 + 1.0 + 2.0);
    CHECK(trace.verdict == Verdict::ConvergedCorrect);

    IterationConfig no_retry = cfg;
    no_retry.max_restarts = 0;
    const IterationTrace dead = run_iteration(query, no_retry, SignConvention::Minus);
    CHECK(dead.verdict == Verdict::ZeroDivisorExhausted);
    CHECK(dead.restarts_used == 0);
    CHECK_FALSE(dead.root_estimate.has_value());
    REQUIRE(dead.iterates.size() == 1);
    CHECK(dead.iterates[0] == 4.0);
}

TEST_CASE("a near-pole start for even degree blows past the divergence bound") {
    const RootQuery query{5.0, 4};
    IterationConfig cfg;
    cfg.offset = 6.0;
    cfg.start = -6.0 + 1e-14; // Q(-6) = 0 for b = 6, d = 4
    cfg.zero_guard = 1e-15;
    cfg.max_restarts = 0;
    const IterationTrace trace = run_iteration(query, cfg);
    CHECK(trace.verdict == Verdict::Diverged);
    CHECK_FALSE(trace.root_estimate.has_value());
}

TEST_CASE("invalid queries and configs are rejected with diagnostics") {
    IterationConfig cfg;
    cfg.offset = 4.0;

    CHECK_THROWS_AS(run_iteration(RootQuery{-5.0, 2}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(run_iteration(RootQuery{0.0, 2}, cfg), std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_iteration(RootQuery{5.0, 1}, cfg),
                         doctest::Contains("trivial"), std::invalid_argument);

    IterationConfig neutral = cfg;
    neutral.offset = 0.0;
    CHECK_THROWS_WITH_AS(run_iteration(RootQuery{5.0, 2}, neutral),
                         doctest::Contains("neutrally stable"), std::invalid_argument);

    IterationConfig bad_tol = cfg;
    bad_tol.tol = 0.0;
    CHECK_THROWS_AS(run_iteration(RootQuery{5.0, 2}, bad_tol), std::invalid_argument);

    CHECK_THROWS_AS(run_iteration(RootQuery{5.0, 3}, cfg, SignConvention::Minus),
                    std::invalid_argument);
}
