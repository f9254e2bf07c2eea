#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace onslab {

enum class FunctionClass { continuous, lip1, cl };

[[nodiscard]] std::string_view to_string(FunctionClass c) noexcept;

class UnknownFunction : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A target function on [0,1].
///
/// `deriv` is required for class cl and optional otherwise. `breakpoints` lists
/// points where the function or its derivative has a kink or jump, so that
/// quadrature can place panel boundaries there. `resolution` plays the same
/// role as SystemHandle::resolution.
struct FunctionSpec {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    FunctionClass class_tag = FunctionClass::continuous;
    double value_at_1 = 0.0;
    std::vector<double> breakpoints;
    double resolution = 1.0;

    [[nodiscard]] bool has_deriv() const noexcept { return static_cast<bool>(deriv); }
    [[nodiscard]] double operator()(double u) const { return eval(u); }
};

/// Builds a FunctionSpec with value_at_1 taken from eval(1). Throws
/// std::invalid_argument if class cl is requested without a derivative.
FunctionSpec make_function(std::string name, std::function<double(double)> eval,
                           std::function<double(double)> deriv, FunctionClass class_tag,
                           std::vector<double> breakpoints = {}, double resolution = 1.0);

/// Largest difference quotient |fn(u_{j+1}) - fn(u_j)| / step over the uniform
/// grid of [0,1] with the given step.
double lipschitz_modulus(const std::function<double(double)>& fn, double step);

/// q ≡ 1.
FunctionSpec one_function();
/// p(u) = u.
FunctionSpec identity_function();
/// f(u) = 1 - cos(4π(u - ½)), vanishing with its derivative at both ends.
FunctionSpec cos_bump_function();
/// g(u) = f(2u) on [0,½), 0 on [½,1] with f the cosine bump.
FunctionSpec g_compressed_function();
/// h(u) = g(2u) on [0,½), 0 on [½,1].
FunctionSpec h_compressed_function();
/// u²/2.
FunctionSpec half_square_function();

/// u ↦ base(2u) on [0,½), 0 on [½,1]. Stays in the class of `base` when base
/// and its derivative vanish at 1, as the cosine bump does.
FunctionSpec compress_function(const FunctionSpec& base, std::string name);

/// α·f + β·g, with merged breakpoints and class the weaker of the two.
FunctionSpec linear_combination(double alpha, const FunctionSpec& f, double beta, const FunctionSpec& g);

/// The named catalog: "one", "id", "cos-bump", "g-compressed", "h-compressed",
/// "half-square".
std::vector<FunctionSpec> function_catalog();

FunctionSpec function_by_name(std::string_view name);

} // namespace onslab
