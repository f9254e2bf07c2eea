#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace onslab::testing {

inline constexpr double kPi = 3.14159265358979323846;
inline const double kSqrt2 = std::sqrt(2.0);

/// Seeded generator for property tests; every case is reproducible.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// Sorted points in [0,1], endpoints included with some probability.
    std::vector<double> sorted_points(int count) {
        std::vector<double> pts;
        for (int i = 0; i < count; ++i) pts.push_back(uniform());
        if (integer(0, 1)) pts.push_back(0.0);
        if (integer(0, 1)) pts.push_back(1.0);
        std::sort(pts.begin(), pts.end());
        return pts;
    }

private:
    std::mt19937_64 rng_;
};

/// Largest order at which quadrature over a catalog system stays cheap.
/// Rademacher functions of order k have 2^k pieces.
inline int quadrature_order_cap(const std::string& system_name, int wanted) {
    return system_name.find("rademacher") != std::string::npos ? std::min(wanted, 16) : wanted;
}

/// Midpoint Riemann sum with m cells.
template <class F>
double riemann(F&& f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

/// Composite Simpson rule with m (even) cells, for smooth oracles.
template <class F>
double simpson(F&& f, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

} // namespace onslab::testing
