#pragma once

#include "onslab/quadrature.hpp"
#include "onslab/systems.hpp"

#include <memory>
#include <span>
#include <vector>

namespace onslab {

class KernelAtPoint;

/// Shared state for the kernels of order n of one system:
///   B_n(u,x) = Σ_{k≤n} φ_k(u) φ_k(x),   Q_n(u,x) = Σ_{k≤n} g_k(u) φ_k(x).
///
/// When the system has no closed-form antiderivative, g_k is tabulated on a
/// uniform grid at construction (cumulative integration, cell by cell) and
/// finished with one short integral from the nearest grid node below u.
/// Copies share the immutable state.
class KernelContext {
public:
    KernelContext(SystemHandle system, int n);
    KernelContext(SystemHandle system, int n, QuadratureRule rule);

    [[nodiscard]] const SystemHandle& system() const noexcept;
    [[nodiscard]] int n() const noexcept;
    [[nodiscard]] const QuadratureRule& rule() const noexcept;

    /// g_k(u) for 1 ≤ k ≤ n.
    [[nodiscard]] double g(int k, double u) const;

    /// True when g is served from the numerical table.
    [[nodiscard]] bool cached() const noexcept;
    [[nodiscard]] std::span<const double> cache_grid() const noexcept;
    /// Tabulated g_k on cache_grid(); empty when not cached.
    [[nodiscard]] std::span<const double> cached_values(int k) const;

    /// Binds the second argument of both kernels to x.
    [[nodiscard]] KernelAtPoint at(double x) const;

    struct State;

private:
    std::shared_ptr<const State> state_;
};

/// Q_n(·,x) and B_n(·,x) with the weights φ_k(x) resolved once. Only indices
/// with φ_k(x) ≠ 0 take part in the sums, which is what makes Haar sweeps
/// cheap (O(log n) active terms).
class KernelAtPoint {
public:
    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] int n() const noexcept;

    [[nodiscard]] double q(double u) const;
    [[nodiscard]] double b(double u) const;

    /// Σ_k φ_k(x)².
    [[nodiscard]] double weight_energy() const noexcept { return energy_; }

    /// Integration rule for Q_n(·,x) and B_n(·,x): the context rule plus the
    /// breakpoints of every active φ_k.
    [[nodiscard]] const QuadratureRule& rule() const noexcept { return rule_; }

    /// ∫_a^b Q_n(u,x) du; closed form when the system provides A_k.
    [[nodiscard]] double q_integral(double a, double b) const;

    /// ∫_0^t Q_n(u,x) du at each point of a sorted grid, accumulated over
    /// adjacent cells.
    [[nodiscard]] std::vector<double> q_cumulative(std::span<const double> grid) const;

    /// P_i = ∫_0^{i/n} Q_n(u,x) du for i = 0..n, accumulated cell by cell.
    [[nodiscard]] std::vector<double> q_prefix_integrals() const;

    /// ∫_0^1 B_n(u,x) du = Σ_k φ_k(x) g_k(1); by quadrature of the summed
    /// kernel when the system has no closed-form antiderivative.
    [[nodiscard]] double b_integral() const;

private:
    friend class KernelContext;
    KernelAtPoint(std::shared_ptr<const KernelContext::State> state, double x);

    std::shared_ptr<const KernelContext::State> state_;
    double x_;
    std::vector<int> active_;
    std::vector<double> weights_;
    double energy_ = 0.0;
    QuadratureRule rule_;
};

double b_kernel(const KernelContext& ctx, double u, double x);
double q_kernel(const KernelContext& ctx, double u, double x);
double q_partial_integral(const KernelContext& ctx, double t, double x);

/// M_n(x) = (1/n) Σ_{i=1}^{n-1} |∫_0^{i/n} Q_n(u,x) du|, with the inner
/// integrals obtained as prefix sums of per-cell integrals. Requires n ≥ 2.
double m_functional(const KernelContext& ctx, double x);

/// M_n(x) with every ∫_0^{i/n} computed independently from 0.
double m_functional_naive(const KernelContext& ctx, double x);

/// Σ_{k≤n} g_k(u)², bounded by u for any orthonormal system.
double bessel_sum(const KernelContext& ctx, double u);

struct CellBound {
    int cell = 0;            // i, covering [(i-1)/n, i/n]
    double abs_integral = 0; // ∫ |Q_n(u,x)| du over the cell
    double bound = 0;        // (1/n) (Σ φ_k(x)²)^{1/2}
};

/// Per-cell L¹ mass of Q_n(·,x) against the Cauchy-Schwarz bound, i = 1..n.
std::vector<CellBound> q_cell_bounds(const KernelContext& ctx, double x);

} // namespace onslab
