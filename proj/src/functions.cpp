#include "onslab/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace onslab {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
} // namespace

std::string_view to_string(FunctionClass c) noexcept {
    switch (c) {
    case FunctionClass::continuous: return "continuous";
    case FunctionClass::lip1: return "Lip1";
    case FunctionClass::cl: return "CL";
    }
    return "unknown";
}

FunctionSpec make_function(std::string name, std::function<double(double)> eval,
                           std::function<double(double)> deriv, FunctionClass class_tag,
                           std::vector<double> breakpoints, double resolution) {
    if (!eval) throw std::invalid_argument("function '" + name + "' requires an evaluator");
    if (class_tag == FunctionClass::cl && !deriv) {
        throw std::invalid_argument("function '" + name + "' is tagged CL but has no derivative");
    }
    FunctionSpec spec;
    spec.value_at_1 = eval(1.0);
    spec.name = std::move(name);
    spec.eval = std::move(eval);
    spec.deriv = std::move(deriv);
    spec.class_tag = class_tag;
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    spec.breakpoints = std::move(breakpoints);
    spec.resolution = resolution;
    return spec;
}

double lipschitz_modulus(const std::function<double(double)>& fn, double step) {
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("lipschitz_modulus step must be in (0,1]");
    const auto cells = static_cast<long>(std::llround(1.0 / step));
    double worst = 0.0;
    double prev = fn(0.0);
    for (long j = 1; j <= cells; ++j) {
        const double u = std::min(1.0, static_cast<double>(j) / cells);
        const double cur = fn(u);
        worst = std::max(worst, std::abs(cur - prev) * cells);
        prev = cur;
    }
    return worst;
}

FunctionSpec one_function() {
    return make_function("one", [](double) { return 1.0; }, [](double) { return 0.0; }, FunctionClass::cl);
}

FunctionSpec identity_function() {
    return make_function("id", [](double u) { return u; }, [](double) { return 1.0; }, FunctionClass::cl);
}

FunctionSpec cos_bump_function() {
    return make_function(
        "cos-bump", [](double u) { return 1.0 - std::cos(kFourPi * (u - 0.5)); },
        [](double u) { return kFourPi * std::sin(kFourPi * (u - 0.5)); }, FunctionClass::cl, {}, 2.0);
}

FunctionSpec compress_function(const FunctionSpec& base, std::string name) {
    std::function<double(double)> deriv;
    if (base.deriv) {
        deriv = [d = base.deriv](double u) { return u < 0.5 ? 2.0 * d(2.0 * u) : 0.0; };
    }
    std::vector<double> bps{0.5};
    for (double b : base.breakpoints) bps.push_back(0.5 * b);
    return make_function(
        std::move(name), [e = base.eval](double u) { return u < 0.5 ? e(2.0 * u) : 0.0; }, std::move(deriv),
        base.class_tag, std::move(bps), 2.0 * base.resolution);
}

FunctionSpec g_compressed_function() { return compress_function(cos_bump_function(), "g-compressed"); }

FunctionSpec h_compressed_function() { return compress_function(g_compressed_function(), "h-compressed"); }

FunctionSpec half_square_function() {
    return make_function("half-square", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
                         FunctionClass::cl);
}

FunctionSpec linear_combination(double alpha, const FunctionSpec& f, double beta, const FunctionSpec& g) {
    std::function<double(double)> deriv;
    if (f.deriv && g.deriv) {
        deriv = [alpha, beta, fd = f.deriv, gd = g.deriv](double u) { return alpha * fd(u) + beta * gd(u); };
    }
    std::vector<double> bps = f.breakpoints;
    bps.insert(bps.end(), g.breakpoints.begin(), g.breakpoints.end());
    FunctionClass tag = std::min(f.class_tag, g.class_tag);
    if (tag == FunctionClass::cl && !deriv) tag = FunctionClass::lip1;
    return make_function(
        f.name + "+" + g.name,
        [alpha, beta, fe = f.eval, ge = g.eval](double u) { return alpha * fe(u) + beta * ge(u); },
        std::move(deriv), tag, std::move(bps), std::max(f.resolution, g.resolution));
}

std::vector<FunctionSpec> function_catalog() {
    return {one_function(),          identity_function(),     cos_bump_function(),
            g_compressed_function(), h_compressed_function(), half_square_function()};
}

FunctionSpec function_by_name(std::string_view name) {
    for (auto& f : function_catalog()) {
        if (f.name == name) return f;
    }
    throw UnknownFunction("unknown function '" + std::string(name) + "'");
}

} // namespace onslab
