#include "onslab/fourier.hpp"

#include "onslab/parallel.hpp"
#include "onslab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace onslab {

namespace {

QuadratureRule function_rule(const SystemHandle& system, int k, const FunctionSpec& f) {
    QuadratureRule rule = rule_for(system, k);
    rule.panels = std::max(rule.panels, static_cast<int>(std::ceil(4.0 * f.resolution)));
    auto bps = system.breakpoints(k);
    bps.insert(bps.end(), f.breakpoints.begin(), f.breakpoints.end());
    return rule.with_breakpoints(bps);
}

void require_deriv(const FunctionSpec& f) {
    if (!f.has_deriv()) throw MissingDerivative("function '" + f.name + "' has no derivative");
}

} // namespace

CoefficientTable::CoefficientTable(SystemHandle system, FunctionSpec function, std::vector<double> coeffs)
    : system_(std::move(system)), function_(std::move(function)), coeffs_(std::move(coeffs)) {}

double CoefficientTable::operator[](int k) const {
    if (k < 1 || k > n_max()) {
        std::ostringstream msg;
        msg << "coefficient index " << k << " outside 1.." << n_max();
        throw IndexOutOfRange(msg.str());
    }
    return coeffs_[k - 1];
}

double coefficient(const SystemHandle& system, const FunctionSpec& f, int k) {
    return integrate([&](double u) { return f.eval(u) * system.eval(k, u); }, 0.0, 1.0,
                     function_rule(system, k, f))
        .value;
}

CoefficientTable coefficients(const SystemHandle& system, const FunctionSpec& f, int n_max) {
    if (n_max < 1) throw std::invalid_argument("coefficients requires n_max >= 1");
    std::vector<double> coeffs(n_max);
    parallel_for(coeffs.size(), [&](std::size_t i) { coeffs[i] = coefficient(system, f, static_cast<int>(i) + 1); });
    return CoefficientTable(system, f, std::move(coeffs));
}

double partial_sum(const CoefficientTable& table, int n, double x) {
    if (n > table.n_max()) {
        std::ostringstream msg;
        msg << "partial sum order " << n << " exceeds table size " << table.n_max();
        throw IndexOutOfRange(msg.str());
    }
    if (n < 0) throw IndexOutOfRange("partial sum order must be non-negative");
    CompensatedSum sum;
    for (int k = 1; k <= n; ++k) sum += table[k] * table.system().eval(k, x);
    return sum.value();
}

double PartialSumSplit::residual() const noexcept { return std::abs(lhs - (term_b - term_q)); }

PartialSumSplit partial_sum_split(const CoefficientTable& table, const KernelAtPoint& kernel) {
    const FunctionSpec& f = table.function();
    require_deriv(f);
    const int n = kernel.n();
    PartialSumSplit out;
    out.lhs = partial_sum(table, n, kernel.x());
    out.term_b = f.value_at_1 * kernel.b_integral();
    QuadratureRule rule = kernel.rule().with_breakpoints(f.breakpoints);
    rule.panels = std::max(rule.panels, static_cast<int>(std::ceil(4.0 * f.resolution)));
    out.term_q = integrate([&](double u) { return f.deriv(u) * kernel.q(u); }, 0.0, 1.0, rule).value;
    return out;
}

PartialSumSplit partial_sum_split(const SystemHandle& system, const FunctionSpec& f, int n, double x) {
    require_deriv(f);
    const KernelContext ctx(system, n);
    return partial_sum_split(coefficients(system, f, n), ctx.at(x));
}

double SummationSplit::rhs(CellSumUpper upper) const noexcept {
    const double cells = upper == CellSumUpper::n ? cell_term + last_cell_term : cell_term;
    return difference_term + cells + tail_term;
}

double SummationSplit::residual(CellSumUpper upper) const noexcept { return std::abs(lhs - rhs(upper)); }

SummationSplit summation_by_parts(const FunctionSpec& f, const FunctionSpec& weight, int n) {
    require_deriv(f);
    if (n < 2) throw std::invalid_argument("summation_by_parts requires n >= 2");
    const auto& d = f.deriv;
    const auto& F = weight.eval;
    const double h = 1.0 / n;

    QuadratureRule rule;
    rule.panels = std::max({8, static_cast<int>(std::ceil(4.0 * f.resolution)),
                            static_cast<int>(std::ceil(4.0 * weight.resolution))});
    std::vector<double> bps = f.breakpoints;
    bps.insert(bps.end(), weight.breakpoints.begin(), weight.breakpoints.end());
    for (double b : f.breakpoints) bps.push_back(b - h);  // jumps of d(x + 1/n)
    for (int i = 1; i < n; ++i) bps.push_back(i * h);
    rule = rule.with_breakpoints(bps);

    SummationSplit out;
    out.lhs = integrate([&](double x) { return d(x) * F(x); }, 0.0, 1.0, rule).value;

    std::vector<double> grid(n + 1);
    for (int i = 0; i <= n; ++i) grid[i] = i * h;
    const auto weight_prefix = cumulative_integral(F, grid, rule);

    CompensatedSum difference;
    CompensatedSum cells;
    for (int i = 1; i <= n; ++i) {
        const double a = grid[i - 1];
        const double b = grid[i];
        if (i < n) {
            const double shift =
                integrate([&](double x) { return d(x) - d(x + h); }, a, b, rule).value;
            difference += n * shift * weight_prefix[i];
        }
        // n ∫_{Δ_i} (d(x) - d(u)) du = d(x) - n ∫_{Δ_i} d
        const double mean = n * integrate(d, a, b, rule).value;
        const double cell = integrate([&](double x) { return (d(x) - mean) * F(x); }, a, b, rule).value;
        if (i < n) {
            cells += cell;
        } else {
            out.last_cell_term = cell;
        }
    }
    out.difference_term = difference.value();
    out.cell_term = cells.value();
    out.tail_term = n * integrate(d, 1.0 - h, 1.0, rule).value * weight_prefix[n];
    return out;
}

FunctionSpec kernel_as_function(const KernelAtPoint& kernel) {
    std::ostringstream name;
    name << "Q" << kernel.n() << "(.," << kernel.x() << ")";
    FunctionSpec spec;
    spec.name = name.str();
    spec.eval = [kernel](double u) { return kernel.q(u); };
    spec.class_tag = FunctionClass::continuous;
    spec.value_at_1 = kernel.q(1.0);
    spec.breakpoints = kernel.rule().breakpoints;
    spec.resolution = 0.5 * kernel.rule().panels;
    return spec;
}

} // namespace onslab
