#pragma once

#include "onslab/functions.hpp"
#include "onslab/kernels.hpp"
#include "onslab/systems.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace onslab {

class IndexOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class MissingDerivative : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// C_k(f) = ∫_0^1 f φ_k for k = 1..n_max. Immutable.
class CoefficientTable {
public:
    CoefficientTable(SystemHandle system, FunctionSpec function, std::vector<double> coeffs);

    [[nodiscard]] const SystemHandle& system() const noexcept { return system_; }
    [[nodiscard]] const FunctionSpec& function() const noexcept { return function_; }
    [[nodiscard]] int n_max() const noexcept { return static_cast<int>(coeffs_.size()); }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    /// 1-based.
    [[nodiscard]] double operator[](int k) const;

private:
    SystemHandle system_;
    FunctionSpec function_;
    std::vector<double> coeffs_;
};

/// One coefficient by a fresh breakpoint-aware quadrature.
double coefficient(const SystemHandle& system, const FunctionSpec& f, int k);

CoefficientTable coefficients(const SystemHandle& system, const FunctionSpec& f, int n_max);

/// S_n(x,f) = Σ_{k≤n} C_k(f) φ_k(x). Throws IndexOutOfRange if n > n_max.
double partial_sum(const CoefficientTable& table, int n, double x);

/// The two sides of the integration-by-parts formula for partial sums,
///   S_n(x,f) = f(1) ∫_0^1 B_n(u,x) du - ∫_0^1 f'(u) Q_n(u,x) du.
struct PartialSumSplit {
    double lhs = 0.0;     // S_n(x,f)
    double term_b = 0.0;  // f(1) ∫ B_n
    double term_q = 0.0;  // ∫ f' Q_n
    [[nodiscard]] double residual() const noexcept;
};

/// Requires f.deriv (MissingDerivative otherwise). All three quantities come
/// from independent quadratures.
PartialSumSplit partial_sum_split(const SystemHandle& system, const FunctionSpec& f, int n, double x);

/// Same, reusing a coefficient table (n ≤ table.n_max()) and a bound kernel of
/// order n.
PartialSumSplit partial_sum_split(const CoefficientTable& table, const KernelAtPoint& kernel);

/// Which cells the "within-cell" sum of the summation-by-parts identity covers.
enum class CellSumUpper { n, n_minus_1 };

/// Summation by parts of ∫_0^1 d(x) F(x) dx over the cells Δ_i = [(i-1)/n, i/n]
/// with d = f':
///
///   ∫ d F = n Σ_{i<n} ∫_{Δ_i} (d(x) - d(x+1/n)) dx · ∫_0^{i/n} F
///         + n Σ_i ∫_{Δ_i} ∫_{Δ_i} (d(x) - d(u)) du F(x) dx
///         + n ∫_{1-1/n}^1 d · ∫_0^1 F.
///
/// The middle sum is exact only when it includes the last cell i = n; the
/// variant stopping at n - 1 is kept for comparison.
struct SummationSplit {
    double lhs = 0.0;
    double difference_term = 0.0;
    double cell_term = 0.0;       // cells 1..n-1
    double last_cell_term = 0.0;  // cell n
    double tail_term = 0.0;

    [[nodiscard]] double rhs(CellSumUpper upper) const noexcept;
    [[nodiscard]] double residual(CellSumUpper upper) const noexcept;
};

/// Requires n ≥ 2 and f.deriv (MissingDerivative otherwise). F's breakpoints
/// and resolution steer the quadrature.
SummationSplit summation_by_parts(const FunctionSpec& f, const FunctionSpec& weight, int n);

/// Q_n(·,x) as a FunctionSpec, for use as the weight F above.
FunctionSpec kernel_as_function(const KernelAtPoint& kernel);

} // namespace onslab
