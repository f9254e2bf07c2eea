#include "onslab/quadrature.hpp"
#include "onslab/summation.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace onslab;
using onslab::testing::Gen;
using onslab::testing::kPi;
using onslab::testing::kSqrt2;

TEST_CASE("integrate: constant, full-period cosine, Haar-weighted identity") {
    QuadratureRule rule;
    const auto one = integrate([](double) { return 1.0; }, 0.0, 1.0, rule);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(one.est_error <= 1e-14);

    const auto cosine = integrate([](double u) { return kSqrt2 * std::cos(2 * kPi * u); }, 0.0, 1.0, rule);
    CHECK(std::abs(cosine.value) < 1e-12);

    QuadratureRule split = rule;
    split.breakpoints = {0.5};
    const auto haar = integrate([](double u) { return u * (u < 0.5 ? 1.0 : -1.0); }, 0.0, 1.0, split);
    CHECK(haar.value == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("integrate: errors and degenerate intervals") {
    QuadratureRule rule;
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.6, 0.4, rule), InvalidInterval);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, -0.1, 0.4, rule), InvalidInterval);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.1, 1.5, rule), InvalidInterval);
    CHECK_THROWS_AS(integrate([](double u) { return u > 0.3 ? std::numeric_limits<double>::quiet_NaN() : 0.0; }, 0.0,
                              1.0, rule),
                    NonFiniteIntegrand);
    CHECK_THROWS_AS(integrate([](double) { return std::numeric_limits<double>::infinity(); }, 0.0, 1.0, rule),
                    NonFiniteIntegrand);

    const auto empty = integrate([](double) { return 7.0; }, 0.4, 0.4, rule);
    CHECK(empty.value == 0.0);
    CHECK(empty.est_error == 0.0);
}

TEST_CASE("integrate: jump at a declared breakpoint is handled, not sampled") {
    // 1/(u - 1/2) is not finite at 1/2 but 1/2 is only ever a panel edge.
    QuadratureRule rule;
    rule.breakpoints = {0.5};
    const auto r = integrate([](double u) { return u == 0.5 ? INFINITY : (u < 0.5 ? 1.0 : 3.0); }, 0.0, 1.0, rule);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("QuadratureRule validation") {
    QuadratureRule rule;
    CHECK_NOTHROW(rule.validate());
    auto bad = rule;
    bad.order = 1;
    CHECK_THROWS_AS(bad.validate(), InvalidRule);
    bad = rule;
    bad.panels = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidRule);
    bad = rule;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidRule);
    bad = rule;
    bad.breakpoints = {0.5, 0.25};
    CHECK_THROWS_AS(bad.validate(), InvalidRule);
    bad = rule;
    bad.breakpoints = {0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), InvalidRule);
    bad = rule;
    bad.breakpoints = {1.5};
    CHECK_THROWS_AS(bad.validate(), InvalidRule);
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, bad), InvalidRule);

    const double extra[] = {0.75, -1.0, 0.25, 0.75, 1.0};
    const auto merged = rule.with_breakpoints(extra);
    REQUIRE(merged.breakpoints.size() == 2);
    CHECK(merged.breakpoints[0] == 0.25);
    CHECK(merged.breakpoints[1] == 0.75);
}

TEST_CASE("gauss_legendre: weights sum to 2, nodes symmetric") {
    for (int order : {2, 3, 8, 16, 31}) {
        const auto& gl = gauss_legendre(order);
        REQUIRE(static_cast<int>(gl.nodes.size()) == order);
        CompensatedSum w;
        for (double x : gl.weights) w += x;
        CHECK(w.value() == doctest::Approx(2.0).epsilon(1e-14));
        for (int i = 0; i < order; ++i) CHECK(gl.nodes[i] == doctest::Approx(-gl.nodes[order - 1 - i]).epsilon(1e-14));
    }
}

TEST_CASE("property: polynomial exactness up to degree 2p-1 per panel") {
    for (int p : {2, 4, 8, 16}) {
        QuadratureRule rule;
        rule.order = p;
        rule.max_doublings = 0;
        for (int d = 0; d <= 2 * p - 1; ++d) {
            const auto r = integrate([d](double u) { return std::pow(u, d); }, 0.0, 1.0, rule);
            CHECK(std::abs(r.value - 1.0 / (d + 1)) < 1e-12);
        }
    }
}

TEST_CASE("property: additivity over a random split point") {
    Gen gen(20240101);
    QuadratureRule rule;
    rule.panels = 4;
    for (int trial = 0; trial < 50; ++trial) {
        const double freq = gen.uniform(1.0, 20.0);
        const double a = gen.uniform(0.0, 0.5);
        const double c = gen.uniform(0.5, 1.0);
        const double b = gen.uniform(a, c);
        const auto f = [freq](double u) { return std::sin(freq * u) * std::exp(u); };
        const double whole = integrate(f, a, c, rule).value;
        const double parts = integrate(f, a, b, rule).value + integrate(f, b, c, rule).value;
        CHECK(std::abs(whole - parts) <= 2 * rule.abs_tol);
    }
}

TEST_CASE("cumulative_integral: spec grids") {
    QuadratureRule rule;
    const double g3[] = {0.0, 0.5, 1.0};
    const auto ones = cumulative_integral([](double) { return 1.0; }, g3, rule);
    CHECK(ones[0] == 0.0);
    CHECK(ones[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ones[2] == doctest::Approx(1.0).epsilon(1e-15));

    QuadratureRule split = rule;
    split.breakpoints = {0.5};
    const auto tent = cumulative_integral([](double u) { return u < 0.5 ? 1.0 : -1.0; }, g3, split);
    CHECK(tent[0] == 0.0);
    CHECK(tent[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(tent[2]) < 1e-15);

    const double quarter[] = {0.25};
    const auto c = cumulative_integral([](double u) { return kSqrt2 * std::cos(2 * kPi * u); }, quarter, rule);
    CHECK(c[0] == doctest::Approx(kSqrt2 / (2 * kPi)).epsilon(1e-13));

    CHECK(cumulative_integral([](double) { return 1.0; }, std::span<const double>{}, rule).empty());
    const double unsorted[] = {0.5, 0.25};
    CHECK_THROWS_AS(cumulative_integral([](double) { return 1.0; }, unsorted, rule), InvalidInterval);
}

TEST_CASE("property: cumulative_integral agrees with integrate from 0") {
    Gen gen(7);
    QuadratureRule rule;
    rule.panels = 4;
    const auto f = [](double u) { return std::cos(9.0 * u) + u * u; };
    for (int trial = 0; trial < 10; ++trial) {
        const auto grid = gen.sorted_points(gen.integer(1, 20));
        const auto cum = cumulative_integral(f, grid, rule);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            CHECK(std::abs(cum[j] - integrate(f, 0.0, grid[j], rule).value) <= 2 * rule.abs_tol);
        }
    }
}

TEST_CASE("CompensatedSum recovers cancellation") {
    CompensatedSum s;
    s += 1.0;
    s += 1e100;
    s += 1.0;
    s += -1e100;
    CHECK(s.value() == 2.0);
}
