#include "onslab/fourier.hpp"
#include "onslab/functions.hpp"
#include "onslab/kernels.hpp"
#include "onslab/systems.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace onslab;
using onslab::testing::Gen;
using onslab::testing::quadrature_order_cap;
using onslab::testing::simpson;

TEST_CASE("coefficients of the constant and the identity") {
    const auto c = cosine_system();
    const auto tq = coefficients(c, one_function(), 32);
    const auto tp = coefficients(c, identity_function(), 32);
    for (int k = 1; k <= 32; ++k) {
        CHECK(std::abs(tq[k]) < 1e-12);
        CHECK(std::abs(tp[k]) < 1e-12);
    }
    const auto th = coefficients(haar_system(), identity_function(), 4);
    CHECK(th[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(th[2] == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(partial_sum(th, 2, 0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(partial_sum(tq, 17, 0.3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(partial_sum(th, 0, 0.3) == 0.0);

    CHECK_THROWS_AS(partial_sum(th, 5, 0.3), IndexOutOfRange);
    CHECK_THROWS_AS((void)th[0], IndexOutOfRange);
    CHECK_THROWS_AS((void)th[5], IndexOutOfRange);
    CHECK(th.n_max() == 4);
}

TEST_CASE("property: table entries match fresh quadratures") {
    Gen gen(41);
    for (const auto& name : catalog_system_names()) {
        const auto s = system_by_name(name);
        for (const auto& f : function_catalog()) {
            const auto table = coefficients(s, f, 12);
            const int k = gen.integer(1, 12);
            INFO(name << " " << f.name << " k=" << k);
            CHECK(std::abs(table[k] - coefficient(s, f, k)) <= 2e-10);
        }
    }
}

TEST_CASE("coefficients against a Simpson oracle") {
    const auto s = cosine_system();
    const auto f = half_square_function();
    const auto table = coefficients(s, f, 8);
    for (int k = 1; k <= 8; ++k) {
        const double oracle = simpson([&](double u) { return f(u) * s.eval(k, u); }, 0.0, 1.0, 4000);
        CHECK(std::abs(table[k] - oracle) < 1e-10);
        // ∫ u²/2 √2 cos 2πku du = √2 / (4π²k²).
        CHECK(table[k] == doctest::Approx(std::sqrt(2.0) / (4 * M_PI * M_PI * k * k)).epsilon(1e-11));
    }
}

TEST_CASE("property: Bessel inequality for the half-square") {
    const auto f = half_square_function();
    const double norm2 = 1.0 / 20.0;
    for (const auto& name : catalog_system_names()) {
        const int n = quadrature_order_cap(name, 64);
        const auto table = coefficients(system_by_name(name), f, n);
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += table[k] * table[k];
        INFO(name);
        CHECK(s <= norm2 + 1e-8);
    }
}

TEST_CASE("property: partial sums are linear") {
    Gen gen(43);
    const auto f = cos_bump_function();
    const auto g = half_square_function();
    for (const auto& name : catalog_system_names()) {
        const auto s = system_by_name(name);
        const double a = gen.uniform(-2, 2);
        const double b = gen.uniform(-2, 2);
        const auto combo = linear_combination(a, f, b, g);
        const auto tc = coefficients(s, combo, 16);
        const auto tf = coefficients(s, f, 16);
        const auto tg = coefficients(s, g, 16);
        for (int trial = 0; trial < 5; ++trial) {
            const int n = gen.integer(1, 16);
            const double x = gen.uniform();
            INFO(name << " n=" << n << " x=" << x);
            CHECK(std::abs(partial_sum(tc, n, x) - (a * partial_sum(tf, n, x) + b * partial_sum(tg, n, x))) < 1e-10);
        }
    }
}

TEST_CASE("integration by parts of partial sums") {
    const auto c = cosine_system();
    const auto p = partial_sum_split(c, identity_function(), 4, 0.2);
    CHECK(std::abs(p.lhs) < 1e-12);
    CHECK(std::abs(p.term_b - p.term_q) < 1e-8);

    CHECK(partial_sum_split(c, half_square_function(), 8, 0.5).residual() < 1e-7);
    CHECK(partial_sum_split(haar_system(), cos_bump_function(), 16, 0.3).residual() < 1e-7);

    const auto no_deriv = make_function("abs", [](double u) { return std::abs(u - 0.5); }, {}, FunctionClass::lip1, {0.5});
    CHECK_THROWS_AS(partial_sum_split(c, no_deriv, 4, 0.2), MissingDerivative);
}

TEST_CASE("integration by parts: terms against independent oracles") {
    const auto s = cosine_system();
    const auto f = half_square_function();
    const int n = 8;
    const double x = 0.5;
    const auto split = partial_sum_split(s, f, n, x);
    double b = 0.0;
    double q = 0.0;
    double lhs = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double w = s.eval(k, x);
        b += w * simpson([&](double u) { return s.eval(k, u); }, 0.0, 1.0, 4000);
        q += w * simpson([&](double u) { return f.deriv(u) * s.antideriv(k, u); }, 0.0, 1.0, 4000);
        lhs += w * simpson([&](double u) { return f(u) * s.eval(k, u); }, 0.0, 1.0, 4000);
    }
    CHECK(std::abs(split.term_b - f.value_at_1 * b) < 1e-9);
    CHECK(std::abs(split.term_q - q) < 1e-9);
    CHECK(std::abs(split.lhs - lhs) < 1e-9);
}

TEST_CASE("property: integration by parts over the catalog") {
    for (const char* name : {"cosine", "haar"}) {
        const auto s = system_by_name(name);
        for (const char* fname : {"id", "half-square", "cos-bump"}) {
            const auto f = function_by_name(fname);
            const auto table = coefficients(s, f, 64);
            for (int n : {1, 2, 3, 8, 31, 64}) {
                const KernelContext ctx(s, n);
                for (int i = 0; i <= 8; ++i) {
                    const auto split = partial_sum_split(table, ctx.at(i / 8.0));
                    INFO(name << " " << fname << " n=" << n << " x=" << i / 8.0);
                    CHECK(split.residual() < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("summation by parts with the constant weight") {
    const auto one = one_function();
    const auto id = summation_by_parts(identity_function(), one, 4);
    CHECK(id.lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(id.residual(CellSumUpper::n)) < 1e-8);

    const auto hs = summation_by_parts(half_square_function(), one, 4);
    CHECK(hs.lhs == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hs.difference_term == doctest::Approx(-0.375).epsilon(1e-13));
    CHECK(hs.tail_term == doctest::Approx(0.875).epsilon(1e-13));
    CHECK(std::abs(hs.cell_term + hs.last_cell_term) < 1e-14);
    CHECK(std::abs(hs.residual(CellSumUpper::n)) < 1e-12);

    // f' ≡ 0: everything vanishes.
    const auto flat = summation_by_parts(one, one, 8);
    CHECK(flat.lhs == 0.0);
    CHECK(flat.difference_term == 0.0);
    CHECK(flat.tail_term == 0.0);

    CHECK_THROWS_AS(summation_by_parts(half_square_function(), one, 1), std::invalid_argument);
    const auto no_deriv = make_function("sq", [](double u) { return u * u; }, {}, FunctionClass::continuous);
    CHECK_THROWS_AS(summation_by_parts(no_deriv, one, 4), MissingDerivative);
}

TEST_CASE("summation by parts with a kernel weight, against Simpson oracles") {
    const KernelContext ctx(cosine_system(), 8);
    const auto at = ctx.at(0.3);
    const auto weight = kernel_as_function(at);
    const auto f = half_square_function();
    const auto d = f.deriv;
    for (int n : {2, 4, 8, 16, 32}) {
        const auto s = summation_by_parts(f, weight, n);
        CHECK(s.residual(CellSumUpper::n) < 1e-6);

        const double h = 1.0 / n;
        const auto F = [&](double x) { return at.q(x); };
        const double lhs = simpson([&](double x) { return d(x) * F(x); }, 0.0, 1.0, 8000);
        double diff = 0.0;
        double cells = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double a = (i - 1) * h;
            const double b = i * h;
            if (i < n) {
                diff += simpson([&](double x) { return d(x) - d(x + h); }, a, b, 200) * at.q_integral(0.0, b);
            }
            const double mean = simpson(d, a, b, 200);
            cells += simpson([&](double x) { return (h * d(x) - mean) * F(x); }, a, b, 400);
        }
        const double tail = simpson(d, 1.0 - h, 1.0, 200) * at.q_integral(0.0, 1.0);
        INFO("n=" << n);
        CHECK(std::abs(s.lhs - lhs) < 1e-9);
        CHECK(std::abs(s.difference_term - n * diff) < 1e-9);
        CHECK(std::abs(s.cell_term + s.last_cell_term - n * cells) < 1e-9);
        CHECK(std::abs(s.tail_term - n * tail) < 1e-9);
    }
}

TEST_CASE("summation by parts: stopping the cell sum one early drops the last cell") {
    const KernelContext ctx(cosine_system(), 8);
    const auto weight = kernel_as_function(ctx.at(0.3));
    const auto s = summation_by_parts(half_square_function(), weight, 8);
    CHECK(s.residual(CellSumUpper::n_minus_1) == doctest::Approx(std::abs(s.last_cell_term)).epsilon(1e-9));
    CHECK(std::abs(s.last_cell_term) > 1e-6);
}
