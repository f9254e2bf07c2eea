#pragma once

#include "onslab/quadrature.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace onslab {

/// (k, u) -> value for a 1-based system index k and u in [0,1].
using BasisFn = std::function<double(int, double)>;
/// (k, a, b) -> sorted discontinuities of the k-th function inside (a, b).
using BreakpointFn = std::function<std::vector<double>(int, double, double)>;

enum class Regularity { smooth, piecewise_smooth, piecewise_constant };

class UnknownSystem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An orthonormal system on [0,1]. Immutable once built; every callable is
/// pure, so a handle can be shared freely across threads.
///
/// Beyond point evaluation a system may carry closed forms for the first and
/// second antiderivatives vanishing at 0,
///   g_k(u) = ∫_0^u φ_k   and   A_k(u) = ∫_0^u g_k,
/// which the kernel code prefers over quadrature when present.
class SystemHandle {
public:
    struct Parts {
        std::string name;
        BasisFn eval;
        BasisFn antideriv;   // optional
        BasisFn antideriv2;  // optional
        BreakpointFn breakpoints;
        /// Minimal period of φ_k when it is periodic on [0,1] with a period
        /// dividing 1, else 0. Optional.
        std::function<double(int)> period;
        /// Rough count of oscillations of φ_k per unit length; drives panel
        /// density for smooth integrands.
        std::function<double(int)> resolution;
        Regularity regularity = Regularity::smooth;
    };

    explicit SystemHandle(Parts parts);

    [[nodiscard]] const std::string& name() const noexcept { return parts_.name; }
    [[nodiscard]] double eval(int k, double u) const;
    [[nodiscard]] double operator()(int k, double u) const { return eval(k, u); }

    [[nodiscard]] bool has_antideriv() const noexcept { return static_cast<bool>(parts_.antideriv); }
    [[nodiscard]] double antideriv(int k, double u) const;
    [[nodiscard]] bool has_antideriv2() const noexcept { return static_cast<bool>(parts_.antideriv2); }
    [[nodiscard]] double antideriv2(int k, double u) const;

    [[nodiscard]] std::vector<double> breakpoints(int k) const { return breakpoints(k, 0.0, 1.0); }
    [[nodiscard]] std::vector<double> breakpoints(int k, double a, double b) const;

    [[nodiscard]] double period(int k) const;
    [[nodiscard]] double resolution(int k) const;

    [[nodiscard]] Regularity regularity() const noexcept { return parts_.regularity; }
    [[nodiscard]] bool smooth() const noexcept { return parts_.regularity == Regularity::smooth; }
    [[nodiscard]] bool piecewise_constant() const noexcept {
        return parts_.regularity == Regularity::piecewise_constant;
    }

    [[nodiscard]] const Parts& parts() const noexcept { return parts_; }

    /// Same system with the closed-form antiderivatives removed, forcing every
    /// consumer onto the numerical integration path.
    [[nodiscard]] SystemHandle without_antiderivatives() const;

private:
    Parts parts_;
};

/// φ_k(u) = √2 cos(2πku), k ≥ 1.
SystemHandle cosine_system();

/// L²-normalized Haar functions. X_1 ≡ 1; for 2^s < m ≤ 2^{s+1} the function
/// X_m lives on the (m - 2^s)-th dyadic interval of length 2^{-s}, counted from
/// the left, with value +2^{s/2} on its left half and -2^{s/2} on its right
/// half. Right-continuous at interior jumps, left-continuous at u = 1.
SystemHandle haar_system();

/// r_k(u) = sign(sin(2^k π u)), k ≥ 1, with the same jump convention as Haar.
SystemHandle rademacher_system();

/// u ↦ φ_k(2u) on [0,½), -φ_k(2u - 1) on [½,1].
SystemHandle compress_reflect(const SystemHandle& base);

/// Resolves "cosine", "haar", "rademacher", "reflect(<name>)" and
/// "reflect2(<name>)" (nesting allowed).
SystemHandle system_by_name(std::string_view name);

/// Names accepted by system_by_name that the test suites treat as the catalog.
std::vector<std::string> catalog_system_names();

/// Default integration rule for integrands built from φ_1..φ_n (and products of
/// two of them): order 16, panel density twice the resolution of φ_n, and an
/// absolute tolerance of 1e-10 (1e-13 for piecewise-constant systems).
QuadratureRule rule_for(const SystemHandle& system, int n);

/// Inner product ∫_0^1 φ_j φ_k.
///
/// Piecewise-constant systems with a closed-form antiderivative are handled
/// exactly: the coarser factor is a step function, so the integral is the sum
/// of its step values times increments of the partner's antiderivative. When
/// both factors are periodic the sum runs over one common period only, which
/// keeps Rademacher indices in the thirties tractable. Every other system goes
/// through inner_product_quadrature.
double inner_product(const SystemHandle& system, int j, int k);

/// Inner product by breakpoint-aware Gauss-Legendre quadrature.
double inner_product_quadrature(const SystemHandle& system, int j, int k);

/// n×n matrix of inner_product, row-major.
std::vector<double> gram_matrix(const SystemHandle& system, int n);

} // namespace onslab
