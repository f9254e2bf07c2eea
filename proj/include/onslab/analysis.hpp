#pragma once

#include "onslab/fourier.hpp"
#include "onslab/functions.hpp"
#include "onslab/growth.hpp"
#include "onslab/kernels.hpp"
#include "onslab/systems.hpp"

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace onslab {

/// n^{1/2} · n^{-2} Σ_{k≤n} φ_k(x)² for n = 1..n_max. Bounded at almost every x
/// for any orthonormal system.
GrowthReport lemma1_ratio(const SystemHandle& system, double x, int n_max, const GrowthThresholds& thresholds = {});

/// |S_n(x,f)| for n = 1..n_max. A bounded verdict is evidence that f has
/// bounded partial sums at x.
GrowthReport e_phi_membership(const SystemHandle& system, const FunctionSpec& f, double x, int n_max,
                              const GrowthThresholds& thresholds = {});

/// M_n(x) for n = 2..n_max.
GrowthReport m_sweep(const SystemHandle& system, double x, int n_max, const GrowthThresholds& thresholds = {});

/// M_n sweeps for the cosine system at each point (n_max ≥ 8).
std::vector<GrowthReport> cosine_m_experiment(std::span<const double> x_grid, int n_max,
                                              const GrowthThresholds& thresholds = {});
/// M_n sweeps for the Haar system at each point (n_max ≥ 8).
std::vector<GrowthReport> haar_m_experiment(std::span<const double> x_grid, int n_max,
                                            const GrowthThresholds& thresholds = {});

/// Checks M_n ≤ C (Σ_{k≤n} k^{-2})^{1/2} over the whole report, with C chosen
/// so that equality holds at n = fit_n.
struct BoundShapeCheck {
    int fit_n = 16;
    double constant = 0.0;
    double max_ratio = 0.0;  // max_n M_n / (C (Σ k^{-2})^{1/2})
    int worst_n = 0;
    [[nodiscard]] bool holds() const noexcept { return max_ratio <= 1.0 + 1e-12; }
};

BoundShapeCheck inverse_square_bound_shape(const GrowthReport& m_report, int fit_n = 16);

enum class ConclusionOutcome {
    supported,          // hypotheses bounded, conclusion bounded
    inconclusive,       // hypotheses bounded, conclusion inconclusive
    violated,           // hypotheses bounded, conclusion growing
    hypothesis_not_met  // some hypothesis not classified bounded
};

[[nodiscard]] std::string_view to_string(ConclusionOutcome o) noexcept;

/// Bounded M_n(x) together with bounded partial sums of q ≡ 1 and p(u) = u
/// should imply bounded partial sums of every f ∈ C_L at x.
struct BoundednessProbe {
    double x = 0.0;
    GrowthReport s_q;
    GrowthReport s_p;
    GrowthReport m_n;
    GrowthReport s_f;
    ConclusionOutcome outcome = ConclusionOutcome::hypothesis_not_met;
};

/// Requires f to be tagged CL (std::invalid_argument otherwise).
std::vector<BoundednessProbe> boundedness_experiment(const SystemHandle& system, const FunctionSpec& f,
                                                     std::span<const double> x_grid, int n_max,
                                                     const GrowthThresholds& thresholds = {});

/// If ∫B_n stays bounded while ∫Q_n grows, the partial sums of p(u) = u must
/// grow, because S_n(x,p) = ∫B_n - ∫Q_n.
[[nodiscard]] bool linear_partial_sum_consistent(const GrowthReport& b_integral, const GrowthReport& q_integral,
                                                 const GrowthReport& s_p) noexcept;

struct LinearPartialSumProbe {
    GrowthReport b_integral;  // |∫_0^1 B_n(u,x) du|
    GrowthReport q_integral;  // |∫_0^1 Q_n(u,x) du|
    GrowthReport s_p;         // |S_n(x,p)|
    double max_identity_residual = 0.0;  // max_n |S_n(x,p) - (∫B_n - ∫Q_n)|
    [[nodiscard]] bool consistent() const noexcept {
        return linear_partial_sum_consistent(b_integral, q_integral, s_p);
    }
};

LinearPartialSumProbe linear_partial_sum_probe(const SystemHandle& system, double x, int n_max,
                                               const GrowthThresholds& thresholds = {});

/// f_n(u) = ∫_0^u sign(∫_0^y Q_n(v,t) dv) dy on a uniform grid, sign(0) = 0,
/// outer integral by the trapezoid rule, linear in between nodes.
struct ExtremalFunction {
    FunctionSpec function;
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> signs;
    /// Largest |Δf|/|Δu| between grid nodes, which for a piecewise linear
    /// interpolant is the modulus over all pairs.
    [[nodiscard]] double lipschitz_modulus() const;
};

/// Requires grid_size ≥ 64.
ExtremalFunction extremal_sequence(const KernelContext& ctx, double t, int grid_size);

/// ∫_0^1 f Q_n(u,t) du directly and as S1 + S2 + S3:
///   S1 = Σ_{i<n} (f(i/n) - f((i+1)/n)) ∫_0^{i/n} Q_n,
///   S2 = Σ_{i≤n} ∫_{Δ_i} (f(u) - f(i/n)) Q_n(u,t) du,
///   S3 = f(1) ∫_0^1 Q_n.
struct ExtremalSplit {
    double direct = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    [[nodiscard]] double residual() const noexcept;
};

ExtremalSplit extremal_split(const KernelContext& ctx, const ExtremalFunction& fn, double t);

struct ExtremalRow {
    int n = 0;
    ExtremalSplit split;
    double m_n = 0.0;
    double lipschitz = 0.0;
    double value_at_0 = 0.0;
};

std::vector<ExtremalRow> extremal_experiment(const SystemHandle& system, double t, std::span<const int> orders,
                                             int grid_size);

/// Vanishing moments and coefficient relations of the compress-and-reflect
/// construction, with Φ = reflect(base), G = reflect(Φ), f the cosine bump,
/// g and h its compressions.
struct ReflectionMoments {
    int n = 0;
    double mean_phi = 0.0;   // ∫ Φ_n
    double mean_g = 0.0;     // ∫ G_n
    double moment_g = 0.0;   // ∫ u G_n
    double c_f_base = 0.0;   // C_n(f, base)
    double c_g_phi = 0.0;    // C_n(g, Φ)
    double c_h_g = 0.0;      // C_n(h, G)
    double c_g_g = 0.0;      // C_n(g, G)
    [[nodiscard]] double halving_residual() const noexcept;       // |C_n(h,G) - ½ C_n(g,Φ)|
    [[nodiscard]] double base_halving_residual() const noexcept;  // |C_n(g,Φ) - ½ C_n(f,base)|
};

std::vector<ReflectionMoments> reflection_moments(const SystemHandle& base, int n_max);

} // namespace onslab
