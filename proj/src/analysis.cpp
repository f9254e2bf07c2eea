#include "onslab/analysis.hpp"

#include "onslab/parallel.hpp"
#include "onslab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace onslab {

namespace {

std::string point_label(std::string_view what, const SystemHandle& system, double x) {
    std::ostringstream s;
    s.precision(17);
    s << what << "[" << system.name() << "](x=" << x << ")";
    return s.str();
}

void check_point(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("evaluation point must lie in [0,1]");
}

void check_n_max(int n_max, int minimum) {
    if (n_max < minimum) {
        std::ostringstream msg;
        msg << "n_max must be >= " << minimum << ", got " << n_max;
        throw std::invalid_argument(msg.str());
    }
}

std::vector<int> index_range(int first, int last) {
    std::vector<int> out;
    for (int n = first; n <= last; ++n) out.push_back(n);
    return out;
}

double interpolate(const std::vector<double>& values, double u) {
    const auto cells = static_cast<long>(values.size()) - 1;
    const double pos = std::clamp(u, 0.0, 1.0) * cells;
    const long j = std::min(static_cast<long>(std::floor(pos)), cells - 1);
    const double frac = pos - j;
    if (frac == 0.0) return values[j];
    return values[j] + frac * (values[j + 1] - values[j]);
}

} // namespace

GrowthReport lemma1_ratio(const SystemHandle& system, double x, int n_max, const GrowthThresholds& thresholds) {
    check_point(x);
    check_n_max(n_max, 1);
    std::vector<double> values;
    values.reserve(n_max);
    CompensatedSum energy;
    for (int n = 1; n <= n_max; ++n) {
        const double v = system.eval(n, x);
        energy += v * v;
        const double nd = n;
        values.push_back(std::sqrt(nd) * energy.value() / (nd * nd));
    }
    return make_growth_report(point_label("lemma1", system, x), index_range(1, n_max), std::move(values), thresholds);
}

GrowthReport e_phi_membership(const SystemHandle& system, const FunctionSpec& f, double x, int n_max,
                              const GrowthThresholds& thresholds) {
    check_point(x);
    check_n_max(n_max, 1);
    const CoefficientTable table = coefficients(system, f, n_max);
    std::vector<double> values;
    values.reserve(n_max);
    CompensatedSum sum;
    for (int n = 1; n <= n_max; ++n) {
        sum += table[n] * system.eval(n, x);
        values.push_back(std::abs(sum.value()));
    }
    return make_growth_report(point_label("S_n(" + f.name + ")", system, x), index_range(1, n_max),
                              std::move(values), thresholds);
}

GrowthReport m_sweep(const SystemHandle& system, double x, int n_max, const GrowthThresholds& thresholds) {
    check_point(x);
    check_n_max(n_max, 2);
    std::vector<double> values(n_max - 1);
    parallel_for(values.size(), [&](std::size_t i) {
        const KernelContext ctx(system, static_cast<int>(i) + 2);
        values[i] = m_functional(ctx, x);
    });
    return make_growth_report(point_label("M_n", system, x), index_range(2, n_max), std::move(values), thresholds);
}

namespace {

std::vector<GrowthReport> m_experiment(const SystemHandle& system, std::span<const double> x_grid, int n_max,
                                       const GrowthThresholds& thresholds) {
    check_n_max(n_max, 8);
    std::vector<GrowthReport> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) out.push_back(m_sweep(system, x, n_max, thresholds));
    return out;
}

} // namespace

std::vector<GrowthReport> cosine_m_experiment(std::span<const double> x_grid, int n_max,
                                              const GrowthThresholds& thresholds) {
    return m_experiment(cosine_system(), x_grid, n_max, thresholds);
}

std::vector<GrowthReport> haar_m_experiment(std::span<const double> x_grid, int n_max,
                                            const GrowthThresholds& thresholds) {
    return m_experiment(haar_system(), x_grid, n_max, thresholds);
}

BoundShapeCheck inverse_square_bound_shape(const GrowthReport& m_report, int fit_n) {
    BoundShapeCheck check;
    check.fit_n = fit_n;
    const auto it = std::find(m_report.indices.begin(), m_report.indices.end(), fit_n);
    if (it == m_report.indices.end()) throw std::invalid_argument("fit index not present in report");

    auto shape = [](int n) {
        CompensatedSum s;
        for (int k = 1; k <= n; ++k) s += 1.0 / (static_cast<double>(k) * k);
        return std::sqrt(s.value());
    };
    const double fit_value = m_report.values[it - m_report.indices.begin()];
    check.constant = fit_value / shape(fit_n);
    for (std::size_t i = 0; i < m_report.indices.size(); ++i) {
        const int n = m_report.indices[i];
        const double bound = check.constant * shape(n);
        const double ratio = bound > 0.0 ? m_report.values[i] / bound : (m_report.values[i] > 0.0 ? INFINITY : 0.0);
        if (ratio > check.max_ratio || check.worst_n == 0) {
            check.max_ratio = ratio;
            check.worst_n = n;
        }
    }
    return check;
}

std::string_view to_string(ConclusionOutcome o) noexcept {
    switch (o) {
    case ConclusionOutcome::supported: return "supported";
    case ConclusionOutcome::inconclusive: return "inconclusive";
    case ConclusionOutcome::violated: return "violated";
    case ConclusionOutcome::hypothesis_not_met: return "hypothesis-not-met";
    }
    return "inconclusive";
}

std::vector<BoundednessProbe> boundedness_experiment(const SystemHandle& system, const FunctionSpec& f,
                                                     std::span<const double> x_grid, int n_max,
                                                     const GrowthThresholds& thresholds) {
    if (f.class_tag != FunctionClass::cl) {
        throw std::invalid_argument("function '" + f.name + "' must be tagged CL");
    }
    check_n_max(n_max, 2);
    const FunctionSpec q = one_function();
    const FunctionSpec p = identity_function();
    std::vector<BoundednessProbe> out;
    for (double x : x_grid) {
        BoundednessProbe probe;
        probe.x = x;
        probe.s_q = e_phi_membership(system, q, x, n_max, thresholds);
        probe.s_p = e_phi_membership(system, p, x, n_max, thresholds);
        probe.m_n = m_sweep(system, x, n_max, thresholds);
        probe.s_f = e_phi_membership(system, f, x, n_max, thresholds);
        const bool hypothesis = probe.s_q.classification == Growth::bounded &&
                                probe.s_p.classification == Growth::bounded &&
                                probe.m_n.classification == Growth::bounded;
        if (!hypothesis) {
            probe.outcome = ConclusionOutcome::hypothesis_not_met;
        } else if (probe.s_f.classification == Growth::bounded) {
            probe.outcome = ConclusionOutcome::supported;
        } else if (probe.s_f.classification == Growth::growing) {
            probe.outcome = ConclusionOutcome::violated;
        } else {
            probe.outcome = ConclusionOutcome::inconclusive;
        }
        out.push_back(std::move(probe));
    }
    return out;
}

bool linear_partial_sum_consistent(const GrowthReport& b_integral, const GrowthReport& q_integral,
                                   const GrowthReport& s_p) noexcept {
    if (b_integral.classification == Growth::bounded && q_integral.classification == Growth::growing) {
        return s_p.classification == Growth::growing;
    }
    return true;
}

LinearPartialSumProbe linear_partial_sum_probe(const SystemHandle& system, double x, int n_max,
                                               const GrowthThresholds& thresholds) {
    check_point(x);
    check_n_max(n_max, 1);
    const CoefficientTable table = coefficients(system, identity_function(), n_max);
    std::vector<double> b(n_max);
    std::vector<double> q(n_max);
    std::vector<double> s(n_max);
    std::vector<double> residual(n_max);
    parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        const KernelContext ctx(system, n);
        const KernelAtPoint kp = ctx.at(x);
        const double bi = kp.b_integral();
        const double qi = kp.q_integral(0.0, 1.0);
        const double sp = partial_sum(table, n, x);
        b[i] = std::abs(bi);
        q[i] = std::abs(qi);
        s[i] = std::abs(sp);
        residual[i] = std::abs(sp - (bi - qi));
    });
    LinearPartialSumProbe probe;
    probe.b_integral = make_growth_report(point_label("int_B", system, x), index_range(1, n_max), b, thresholds);
    probe.q_integral = make_growth_report(point_label("int_Q", system, x), index_range(1, n_max), q, thresholds);
    probe.s_p = make_growth_report(point_label("S_n(id)", system, x), index_range(1, n_max), s, thresholds);
    probe.max_identity_residual = *std::max_element(residual.begin(), residual.end());
    return probe;
}

double ExtremalFunction::lipschitz_modulus() const {
    double worst = 0.0;
    for (std::size_t j = 1; j < nodes.size(); ++j) {
        worst = std::max(worst, std::abs(values[j] - values[j - 1]) / (nodes[j] - nodes[j - 1]));
    }
    return worst;
}

ExtremalFunction extremal_sequence(const KernelContext& ctx, double t, int grid_size) {
    if (grid_size < 64) throw std::invalid_argument("extremal_sequence requires grid_size >= 64");
    check_point(t);
    ExtremalFunction out;
    out.nodes.resize(grid_size + 1);
    for (int j = 0; j <= grid_size; ++j) out.nodes[j] = static_cast<double>(j) / grid_size;

    const auto inner = ctx.at(t).q_cumulative(out.nodes);
    out.signs.resize(inner.size());
    for (std::size_t j = 0; j < inner.size(); ++j) {
        out.signs[j] = inner[j] > 0.0 ? 1.0 : (inner[j] < 0.0 ? -1.0 : 0.0);
    }

    out.values.assign(grid_size + 1, 0.0);
    const double h = 1.0 / grid_size;
    for (int j = 1; j <= grid_size; ++j) {
        out.values[j] = out.values[j - 1] + 0.5 * h * (out.signs[j - 1] + out.signs[j]);
    }

    auto values = std::make_shared<const std::vector<double>>(out.values);
    std::ostringstream name;
    name << "f_" << ctx.n() << "(t=" << t << ")";
    std::vector<double> kinks(out.nodes.begin() + 1, out.nodes.end() - 1);
    out.function = make_function(
        name.str(), [values](double u) { return interpolate(*values, u); }, nullptr, FunctionClass::lip1,
        std::move(kinks));
    return out;
}

double ExtremalSplit::residual() const noexcept { return std::abs(direct - (s1 + s2 + s3)); }

ExtremalSplit extremal_split(const KernelContext& ctx, const ExtremalFunction& fn, double t) {
    const int n = ctx.n();
    const KernelAtPoint kp = ctx.at(t);
    const auto& f = fn.function.eval;
    const QuadratureRule rule = kp.rule().with_breakpoints(fn.function.breakpoints);
    const auto prefix = kp.q_prefix_integrals();

    ExtremalSplit split;
    split.direct = integrate([&](double u) { return f(u) * kp.q(u); }, 0.0, 1.0, rule).value;

    CompensatedSum s1;
    CompensatedSum s2;
    for (int i = 1; i <= n; ++i) {
        const double right = static_cast<double>(i) / n;
        const double f_right = f(right);
        if (i < n) s1 += (f_right - f(static_cast<double>(i + 1) / n)) * prefix[i];
        const double left = static_cast<double>(i - 1) / n;
        s2 += integrate([&](double u) { return (f(u) - f_right) * kp.q(u); }, left, right, rule).value;
    }
    split.s1 = s1.value();
    split.s2 = s2.value();
    split.s3 = f(1.0) * prefix[n];
    return split;
}

std::vector<ExtremalRow> extremal_experiment(const SystemHandle& system, double t, std::span<const int> orders,
                                             int grid_size) {
    std::vector<ExtremalRow> rows(orders.size());
    parallel_for(orders.size(), [&](std::size_t i) {
        const int n = orders[i];
        const KernelContext ctx(system, n);
        const ExtremalFunction fn = extremal_sequence(ctx, t, grid_size);
        ExtremalRow row;
        row.n = n;
        row.split = extremal_split(ctx, fn, t);
        row.m_n = n >= 2 ? m_functional(ctx, t) : 0.0;
        row.lipschitz = fn.lipschitz_modulus();
        row.value_at_0 = fn.function.eval(0.0);
        rows[i] = row;
    });
    return rows;
}

double ReflectionMoments::halving_residual() const noexcept { return std::abs(c_h_g - 0.5 * c_g_phi); }

double ReflectionMoments::base_halving_residual() const noexcept { return std::abs(c_g_phi - 0.5 * c_f_base); }

std::vector<ReflectionMoments> reflection_moments(const SystemHandle& base, int n_max) {
    check_n_max(n_max, 1);
    const SystemHandle phi = compress_reflect(base);
    const SystemHandle g_sys = compress_reflect(phi);
    const FunctionSpec q = one_function();
    const FunctionSpec p = identity_function();
    const FunctionSpec f = cos_bump_function();
    const FunctionSpec g = g_compressed_function();
    const FunctionSpec h = h_compressed_function();

    std::vector<ReflectionMoments> rows(n_max);
    parallel_for(rows.size(), [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        ReflectionMoments r;
        r.n = n;
        r.mean_phi = coefficient(phi, q, n);
        r.mean_g = coefficient(g_sys, q, n);
        r.moment_g = coefficient(g_sys, p, n);
        r.c_f_base = coefficient(base, f, n);
        r.c_g_phi = coefficient(phi, g, n);
        r.c_h_g = coefficient(g_sys, h, n);
        r.c_g_g = coefficient(g_sys, g, n);
        rows[i] = r;
    });
    return rows;
}

} // namespace onslab
