#include "onslab/quadrature.hpp"

#include "onslab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

namespace onslab {

namespace {

GaussLegendre compute_gauss_legendre(int order) {
    GaussLegendre rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = order * (z * p1 - p2) / (z * z - 1.0);
            const double z_prev = z;
            z = z_prev - p1 / dp;
            if (std::abs(z - z_prev) <= 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

// Sum of the Gauss rule over `panels` equal panels of [a, b].
double panel_sum(const Integrand& f, double a, double b, int panels, const GaussLegendre& gl) {
    CompensatedSum total;
    const double h = (b - a) / panels;
    const double half = 0.5 * h;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + half;
        CompensatedSum panel;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double u = mid + half * gl.nodes[q];
            const double v = f(u);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "integrand is not finite at u=" << u;
                throw NonFiniteIntegrand(msg.str());
            }
            panel += gl.weights[q] * v;
        }
        total += half * panel.value();
    }
    return total.value();
}

} // namespace

void QuadratureRule::validate() const {
    if (order < 2) throw InvalidRule("quadrature order must be at least 2");
    if (panels < 1) throw InvalidRule("quadrature panels must be at least 1");
    if (!(abs_tol > 0.0)) throw InvalidRule("quadrature abs_tol must be positive");
    if (max_doublings < 0) throw InvalidRule("quadrature max_doublings must be non-negative");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const double b = breakpoints[i];
        if (!(b >= 0.0 && b <= 1.0)) throw InvalidRule("breakpoints must lie in [0,1]");
        if (i > 0 && !(breakpoints[i - 1] < b)) {
            throw InvalidRule("breakpoints must be strictly increasing");
        }
    }
}

QuadratureRule QuadratureRule::with_breakpoints(std::span<const double> extra) const {
    QuadratureRule out = *this;
    out.breakpoints.reserve(breakpoints.size() + extra.size());
    for (double b : extra) {
        if (b > 0.0 && b < 1.0) out.breakpoints.push_back(b);
    }
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end()),
                          out.breakpoints.end());
    return out;
}

const GaussLegendre& gauss_legendre(int order) {
    if (order < 1) throw InvalidRule("Gauss-Legendre order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussLegendre>(compute_gauss_legendre(order));
    return *slot;
}

IntegrationResult integrate(const Integrand& f, double a, double b, const QuadratureRule& rule) {
    rule.validate();
    if (!(a <= b)) {
        std::ostringstream msg;
        msg << "invalid interval [" << a << ", " << b << "]";
        throw InvalidInterval(msg.str());
    }
    if (a < 0.0 || b > 1.0) {
        std::ostringstream msg;
        msg << "interval [" << a << ", " << b << "] leaves [0,1]";
        throw InvalidInterval(msg.str());
    }
    if (a == b) return {0.0, 0.0, 1};

    std::vector<double> cuts{a};
    const auto first = std::upper_bound(rule.breakpoints.begin(), rule.breakpoints.end(), a);
    for (auto it = first; it != rule.breakpoints.end() && *it < b; ++it) cuts.push_back(*it);
    cuts.push_back(b);

    const GaussLegendre& gl = gauss_legendre(rule.order);
    const std::size_t segments = cuts.size() - 1;
    std::vector<int> base(segments);
    for (std::size_t s = 0; s < segments; ++s) {
        const double len = cuts[s + 1] - cuts[s];
        base[s] = std::max(1, static_cast<int>(std::ceil(rule.panels * len - 1e-9)));
    }

    auto evaluate = [&](int multiplier, int& panels_used) {
        CompensatedSum total;
        panels_used = 0;
        for (std::size_t s = 0; s < segments; ++s) {
            const int panels = base[s] * multiplier;
            total += panel_sum(f, cuts[s], cuts[s + 1], panels, gl);
            panels_used += panels;
        }
        return total.value();
    };

    int coarse_panels = 0;
    int fine_panels = 0;
    double coarse = evaluate(1, coarse_panels);
    double fine = evaluate(2, fine_panels);
    double err = std::abs(fine - coarse);
    int multiplier = 2;
    for (int d = 0; d < rule.max_doublings && err > rule.abs_tol; ++d) {
        multiplier *= 2;
        coarse = fine;
        fine = evaluate(multiplier, fine_panels);
        err = std::abs(fine - coarse);
    }
    return {fine, err, fine_panels};
}

std::vector<double> cumulative_integral(const Integrand& f, std::span<const double> grid,
                                        const QuadratureRule& rule) {
    std::vector<double> out;
    out.reserve(grid.size());
    CompensatedSum running;
    double prev = 0.0;
    for (double t : grid) {
        if (t < prev) throw InvalidInterval("cumulative_integral grid must be sorted");
        running += integrate(f, prev, t, rule).value;
        out.push_back(running.value());
        prev = t;
    }
    return out;
}

} // namespace onslab
