#include "onslab/systems.hpp"

#include "onslab/parallel.hpp"
#include "onslab/summation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace onslab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_index(int k) {
    if (k < 1) {
        std::ostringstream msg;
        msg << "system index must be >= 1, got " << k;
        throw std::out_of_range(msg.str());
    }
}

void keep_inside(std::vector<double>& points, double lo, double hi) {
    std::erase_if(points, [&](double p) { return !(p > lo && p < hi && p > 0.0 && p < 1.0); });
}

struct HaarCell {
    double left;
    double mid;
    double right;
    double amplitude;
};

// Support of X_m for m >= 2, blocks 2^s < m <= 2^{s+1}.
HaarCell haar_cell(int m) {
    const auto offset = static_cast<unsigned>(m - 1);
    const int s = static_cast<int>(std::bit_width(offset)) - 1;
    const int j = m - (1 << s) - 1;
    const double width = std::ldexp(1.0, -s);
    const double left = j * width;
    return {left, left + 0.5 * width, left + width, std::exp2(0.5 * s)};
}

constexpr int kMaxRademacherIndex = 1000;
constexpr double kMaxBreakpoints = 1 << 24;

void check_rademacher_index(int k) {
    check_index(k);
    if (k > kMaxRademacherIndex) throw std::out_of_range("rademacher index too large");
}

} // namespace

SystemHandle::SystemHandle(Parts parts) : parts_(std::move(parts)) {
    if (!parts_.eval) throw std::invalid_argument("system requires an evaluator");
    if (!parts_.breakpoints) {
        parts_.breakpoints = [](int, double, double) { return std::vector<double>{}; };
    }
    if (!parts_.resolution) parts_.resolution = [](int) { return 1.0; };
}

double SystemHandle::eval(int k, double u) const {
    check_index(k);
    return parts_.eval(k, u);
}

double SystemHandle::antideriv(int k, double u) const {
    check_index(k);
    if (!parts_.antideriv) throw std::logic_error("system '" + parts_.name + "' has no closed-form antiderivative");
    return parts_.antideriv(k, u);
}

double SystemHandle::antideriv2(int k, double u) const {
    check_index(k);
    if (!parts_.antideriv2) throw std::logic_error("system '" + parts_.name + "' has no closed-form second antiderivative");
    return parts_.antideriv2(k, u);
}

std::vector<double> SystemHandle::breakpoints(int k, double a, double b) const {
    check_index(k);
    auto points = parts_.breakpoints(k, a, b);
    keep_inside(points, a, b);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

double SystemHandle::period(int k) const {
    check_index(k);
    return parts_.period ? parts_.period(k) : 0.0;
}

double SystemHandle::resolution(int k) const {
    check_index(k);
    return parts_.resolution(k);
}

SystemHandle SystemHandle::without_antiderivatives() const {
    Parts copy = parts_;
    copy.antideriv = nullptr;
    copy.antideriv2 = nullptr;
    return SystemHandle(std::move(copy));
}

SystemHandle cosine_system() {
    SystemHandle::Parts p;
    p.name = "cosine";
    p.eval = [](int k, double u) { return kSqrt2 * std::cos(kTwoPi * k * u); };
    p.antideriv = [](int k, double u) { return kSqrt2 * std::sin(kTwoPi * k * u) / (kTwoPi * k); };
    p.antideriv2 = [](int k, double u) {
        // ∫_0^u √2 sin(2πkv)/(2πk) dv = √2 (1 - cos 2πku)/(2πk)^2, written with sin²
        // to avoid cancellation near u = 0.
        const double w = kTwoPi * k;
        const double s = std::sin(0.5 * w * u);
        return kSqrt2 * 2.0 * s * s / (w * w);
    };
    p.period = [](int k) { return 1.0 / k; };
    p.resolution = [](int k) { return static_cast<double>(k); };
    p.regularity = Regularity::smooth;
    return SystemHandle(std::move(p));
}

SystemHandle haar_system() {
    SystemHandle::Parts p;
    p.name = "haar";
    p.eval = [](int m, double u) {
        if (m == 1) return 1.0;
        const HaarCell c = haar_cell(m);
        if (u < c.left) return 0.0;
        if (u >= c.right) return (u == 1.0 && c.right == 1.0) ? -c.amplitude : 0.0;
        return u < c.mid ? c.amplitude : -c.amplitude;
    };
    p.antideriv = [](int m, double u) {
        if (m == 1) return u;
        const HaarCell c = haar_cell(m);
        if (u <= c.left || u >= c.right) return 0.0;
        return u < c.mid ? c.amplitude * (u - c.left) : c.amplitude * (c.right - u);
    };
    p.breakpoints = [](int m, double, double) {
        if (m == 1) return std::vector<double>{};
        const HaarCell c = haar_cell(m);
        return std::vector<double>{c.left, c.mid, c.right};
    };
    p.regularity = Regularity::piecewise_constant;
    return SystemHandle(std::move(p));
}

SystemHandle rademacher_system() {
    SystemHandle::Parts p;
    p.name = "rademacher";
    p.eval = [](int k, double u) {
        check_rademacher_index(k);
        double cell = std::floor(std::ldexp(u, k));
        if (u >= 1.0) cell = std::ldexp(1.0, k) - 1.0;
        return std::fmod(cell, 2.0) == 0.0 ? 1.0 : -1.0;
    };
    p.antideriv = [](int k, double u) {
        check_rademacher_index(k);
        const double width = std::ldexp(1.0, -k);
        const double cell = std::floor(std::ldexp(u, k));
        const double frac = u - cell * width;
        return std::fmod(cell, 2.0) == 0.0 ? frac : width - frac;
    };
    p.antideriv2 = [](int k, double u) {
        // Every cell of the triangle wave g_k contributes width²/2.
        check_rademacher_index(k);
        const double width = std::ldexp(1.0, -k);
        const double cell = std::floor(std::ldexp(u, k));
        const double frac = u - cell * width;
        const double partial = std::fmod(cell, 2.0) == 0.0 ? 0.5 * frac * frac : width * frac - 0.5 * frac * frac;
        return cell * 0.5 * width * width + partial;
    };
    p.breakpoints = [](int k, double lo, double hi) {
        check_rademacher_index(k);
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
        std::vector<double> out;
        if (!(lo < hi)) return out;
        if ((hi - lo) * std::ldexp(1.0, k) > kMaxBreakpoints) {
            throw std::length_error("too many rademacher breakpoints requested");
        }
        const double width = std::ldexp(1.0, -k);
        for (double m = std::floor(std::ldexp(lo, k)) + 1.0; m * width < hi; m += 1.0) {
            out.push_back(m * width);
        }
        return out;
    };
    p.period = [](int k) {
        check_rademacher_index(k);
        return std::ldexp(1.0, 1 - k);
    };
    p.regularity = Regularity::piecewise_constant;
    return SystemHandle(std::move(p));
}

SystemHandle compress_reflect(const SystemHandle& base) {
    SystemHandle::Parts p;
    p.name = "reflect(" + base.name() + ")";
    p.eval = [base](int k, double u) {
        return u < 0.5 ? base.eval(k, 2.0 * u) : -base.eval(k, 2.0 * u - 1.0);
    };
    if (base.has_antideriv()) {
        p.antideriv = [base](int k, double u) {
            if (u < 0.5) return 0.5 * base.antideriv(k, 2.0 * u);
            return 0.5 * base.antideriv(k, 1.0) - 0.5 * base.antideriv(k, 2.0 * u - 1.0);
        };
        if (base.has_antideriv2()) {
            p.antideriv2 = [base](int k, double u) {
                if (u < 0.5) return 0.25 * base.antideriv2(k, 2.0 * u);
                return 0.25 * base.antideriv2(k, 1.0) + 0.5 * base.antideriv(k, 1.0) * (u - 0.5) -
                       0.25 * base.antideriv2(k, 2.0 * u - 1.0);
            };
        }
    }
    p.breakpoints = [base](int k, double lo, double hi) {
        std::vector<double> out;
        if (lo < 0.5) {
            for (double b : base.breakpoints(k, 2.0 * lo, std::min(2.0 * hi, 1.0))) out.push_back(0.5 * b);
        }
        if (lo < 0.5 && hi > 0.5) out.push_back(0.5);
        if (hi > 0.5) {
            for (double b : base.breakpoints(k, std::max(2.0 * lo - 1.0, 0.0), 2.0 * hi - 1.0)) {
                out.push_back(0.5 * (b + 1.0));
            }
        }
        return out;
    };
    p.resolution = [base](int k) { return 2.0 * base.resolution(k); };
    p.regularity = base.piecewise_constant() ? Regularity::piecewise_constant : Regularity::piecewise_smooth;
    return SystemHandle(std::move(p));
}

SystemHandle system_by_name(std::string_view name) {
    auto strip = [](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        return s;
    };
    name = strip(name);
    if (name == "cosine") return cosine_system();
    if (name == "haar") return haar_system();
    if (name == "rademacher") return rademacher_system();
    auto wrapped = [&](std::string_view prefix) -> std::string_view {
        if (name.size() > prefix.size() + 1 && name.substr(0, prefix.size()) == prefix && name.back() == ')') {
            return name.substr(prefix.size(), name.size() - prefix.size() - 1);
        }
        return {};
    };
    if (auto inner = wrapped("reflect2("); !inner.empty()) {
        return compress_reflect(compress_reflect(system_by_name(inner)));
    }
    if (auto inner = wrapped("reflect("); !inner.empty()) {
        return compress_reflect(system_by_name(inner));
    }
    throw UnknownSystem("unknown system '" + std::string(name) + "'");
}

std::vector<std::string> catalog_system_names() {
    return {"cosine", "haar", "rademacher", "reflect(cosine)", "reflect2(cosine)", "reflect(haar)",
            "reflect(rademacher)"};
}

QuadratureRule rule_for(const SystemHandle& system, int n) {
    QuadratureRule rule;
    rule.order = 16;
    rule.panels = std::max(8, static_cast<int>(std::ceil(2.0 * system.resolution(std::max(n, 1)))));
    rule.abs_tol = system.piecewise_constant() ? 1e-13 : 1e-10;
    return rule;
}

double inner_product_quadrature(const SystemHandle& system, int j, int k) {
    auto bps = system.breakpoints(j);
    auto more = system.breakpoints(k);
    bps.insert(bps.end(), more.begin(), more.end());
    const QuadratureRule rule = rule_for(system, std::max(j, k)).with_breakpoints(bps);
    return integrate([&](double u) { return system.eval(j, u) * system.eval(k, u); }, 0.0, 1.0, rule).value;
}

double inner_product(const SystemHandle& system, int j, int k) {
    if (!system.piecewise_constant() || !system.has_antideriv()) {
        return inner_product_quadrature(system, j, k);
    }
    const int step = std::min(j, k);
    const int partner = std::max(j, k);

    double window = 1.0;
    const double ps = system.period(step);
    const double pp = system.period(partner);
    if (ps > 0.0 && pp > 0.0) {
        const double common = std::max(ps, pp);
        const double ratio = common / std::min(ps, pp);
        if (std::abs(ratio - std::round(ratio)) < 1e-12 && common <= 1.0) window = common;
    }

    std::vector<double> cuts{0.0};
    for (double b : system.breakpoints(step, 0.0, window)) cuts.push_back(b);
    cuts.push_back(window);

    CompensatedSum total;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c];
        const double hi = cuts[c + 1];
        const double level = system.eval(step, 0.5 * (lo + hi));
        total += level * (system.antideriv(partner, hi) - system.antideriv(partner, lo));
    }
    return total.value() / window;
}

std::vector<double> gram_matrix(const SystemHandle& system, int n) {
    if (n < 1) throw std::invalid_argument("gram matrix size must be positive");
    const auto size = static_cast<std::size_t>(n);
    std::vector<double> gram(size * size, 0.0);
    parallel_for(size, [&](std::size_t row) {
        for (std::size_t col = row; col < size; ++col) {
            gram[row * size + col] = inner_product(system, static_cast<int>(row) + 1, static_cast<int>(col) + 1);
        }
    });
    for (std::size_t row = 0; row < size; ++row) {
        for (std::size_t col = 0; col < row; ++col) gram[row * size + col] = gram[col * size + row];
    }
    return gram;
}

} // namespace onslab
