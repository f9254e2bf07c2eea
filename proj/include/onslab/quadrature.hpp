#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace onslab {

class InvalidInterval : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonFiniteIntegrand : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidRule : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Composite Gauss-Legendre configuration on [0,1].
///
/// The interval of integration is first cut at every declared breakpoint, and
/// each resulting segment of length L is split into ceil(panels * L) uniform
/// panels, so `panels` is a density per unit length rather than a fixed count.
/// Integrands that are smooth between breakpoints therefore never see a jump
/// inside a panel.
struct QuadratureRule {
    int order = 16;
    int panels = 1;
    std::vector<double> breakpoints;
    double abs_tol = 1e-10;
    /// Number of times the panel count may be doubled while the estimated
    /// error stays above abs_tol.
    int max_doublings = 6;

    /// Throws InvalidRule when the invariants do not hold.
    void validate() const;

    /// Copy of this rule whose breakpoints also include `extra` (points outside
    /// (0,1) are dropped; duplicates are merged).
    [[nodiscard]] QuadratureRule with_breakpoints(std::span<const double> extra) const;
};

struct IntegrationResult {
    double value = 0.0;
    double est_error = 0.0;
    int panels_used = 1;
};

/// Nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached Gauss-Legendre rule of the given order. Thread-safe; the returned
/// reference stays valid for the lifetime of the program.
const GaussLegendre& gauss_legendre(int order);

using Integrand = std::function<double(double)>;

/// Integral of f over [a,b] ⊆ [0,1]. The error estimate is the difference
/// between the panel count that was finally accepted and half of it.
IntegrationResult integrate(const Integrand& f, double a, double b, const QuadratureRule& rule);

/// F(t_j) = ∫_0^{t_j} f for a sorted grid, accumulated cell by cell.
std::vector<double> cumulative_integral(const Integrand& f, std::span<const double> grid,
                                        const QuadratureRule& rule);

} // namespace onslab
