#include "onslab/kernels.hpp"

#include "onslab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace onslab {

namespace {

// Systems such as Rademacher double their jump count with every index; past
// this many merged breakpoints the remaining (very small amplitude) terms are
// integrated without dedicated panel boundaries.
constexpr std::size_t kBreakpointBudget = 1 << 16;

void check_order(int n) {
    if (n < 1) {
        std::ostringstream msg;
        msg << "kernel order must be >= 1, got " << n;
        throw std::invalid_argument(msg.str());
    }
}

// Zero crossings of f inside (a, b), located by sampling and bisection.
std::vector<double> sign_changes(const std::function<double(double)>& f, double a, double b, int samples) {
    std::vector<double> roots;
    double lo = a;
    double flo = f(lo);
    for (int s = 1; s <= samples; ++s) {
        const double hi = (s == samples) ? b : a + (b - a) * s / samples;
        const double fhi = f(hi);
        if ((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0)) {
            double l = lo;
            double r = hi;
            double fl = flo;
            for (int it = 0; it < 60 && r - l > 1e-16; ++it) {
                const double m = 0.5 * (l + r);
                const double fm = f(m);
                if ((fl < 0.0) == (fm < 0.0)) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            roots.push_back(0.5 * (l + r));
        }
        lo = hi;
        flo = fhi;
    }
    return roots;
}

} // namespace

struct KernelContext::State {
    SystemHandle system;
    int n;
    QuadratureRule rule;
    std::vector<QuadratureRule> term_rules;  // per k, only when cached
    std::vector<double> grid;
    std::vector<std::vector<double>> table;

    double g(int k, double u) const {
        if (k < 1 || k > n) throw std::out_of_range("kernel index outside 1..n");
        if (system.has_antideriv()) return system.antideriv(k, u);
        const auto cells = static_cast<long>(grid.size()) - 1;
        long j = static_cast<long>(std::floor(u * cells));
        j = std::clamp(j, 0L, cells);
        if (grid[j] > u && j > 0) --j;
        const double base = table[k - 1][j];
        if (u == grid[j]) return base;
        const auto& r = term_rules[k - 1];
        return base + integrate([&](double v) { return system.eval(k, v); }, grid[j], u, r).value;
    }
};

KernelContext::KernelContext(SystemHandle system, int n)
    : KernelContext(system, n, rule_for(system, std::max(n, 1))) {}

KernelContext::KernelContext(SystemHandle system, int n, QuadratureRule rule) {
    check_order(n);
    rule.validate();
    auto state = std::make_shared<State>(State{std::move(system), n, std::move(rule), {}, {}, {}});
    if (!state->system.has_antideriv()) {
        const int cells = std::max(64, 4 * n);
        state->grid.resize(cells + 1);
        for (int j = 0; j <= cells; ++j) state->grid[j] = static_cast<double>(j) / cells;
        state->term_rules.reserve(n);
        state->table.reserve(n);
        for (int k = 1; k <= n; ++k) {
            const auto bps = state->system.breakpoints(k);
            state->term_rules.push_back(state->rule.with_breakpoints(bps));
            const SystemHandle& sys = state->system;
            state->table.push_back(cumulative_integral([&](double v) { return sys.eval(k, v); }, state->grid,
                                                       state->term_rules.back()));
        }
    }
    state_ = std::move(state);
}

const SystemHandle& KernelContext::system() const noexcept { return state_->system; }
int KernelContext::n() const noexcept { return state_->n; }
const QuadratureRule& KernelContext::rule() const noexcept { return state_->rule; }
double KernelContext::g(int k, double u) const { return state_->g(k, u); }
bool KernelContext::cached() const noexcept { return !state_->table.empty(); }
std::span<const double> KernelContext::cache_grid() const noexcept { return state_->grid; }

std::span<const double> KernelContext::cached_values(int k) const {
    if (!cached()) return {};
    if (k < 1 || k > state_->n) throw std::out_of_range("kernel index outside 1..n");
    return state_->table[k - 1];
}

KernelAtPoint KernelContext::at(double x) const { return KernelAtPoint(state_, x); }

KernelAtPoint::KernelAtPoint(std::shared_ptr<const KernelContext::State> state, double x)
    : state_(std::move(state)), x_(x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("kernel point x must lie in [0,1]");
    const SystemHandle& sys = state_->system;
    CompensatedSum energy;
    std::vector<double> bps;
    bool budget_exceeded = false;
    for (int k = 1; k <= state_->n; ++k) {
        const double w = sys.eval(k, x);
        if (w == 0.0) continue;
        active_.push_back(k);
        weights_.push_back(w);
        energy += w * w;
        if (!budget_exceeded && !sys.smooth()) {
            try {
                const auto more = sys.breakpoints(k);
                if (bps.size() + more.size() > kBreakpointBudget) {
                    budget_exceeded = true;
                } else {
                    bps.insert(bps.end(), more.begin(), more.end());
                }
            } catch (const std::length_error&) {
                budget_exceeded = true;
            }
        }
    }
    energy_ = energy.value();
    rule_ = state_->rule.with_breakpoints(bps);
}

int KernelAtPoint::n() const noexcept { return state_->n; }

double KernelAtPoint::q(double u) const {
    CompensatedSum sum;
    for (std::size_t i = 0; i < active_.size(); ++i) sum += state_->g(active_[i], u) * weights_[i];
    return sum.value();
}

double KernelAtPoint::b(double u) const {
    CompensatedSum sum;
    for (std::size_t i = 0; i < active_.size(); ++i) sum += state_->system.eval(active_[i], u) * weights_[i];
    return sum.value();
}

double KernelAtPoint::q_integral(double a, double b) const {
    const SystemHandle& sys = state_->system;
    if (sys.has_antideriv2()) {
        if (!(a <= b)) throw InvalidInterval("q_integral requires a <= b");
        CompensatedSum sum;
        for (std::size_t i = 0; i < active_.size(); ++i) {
            const int k = active_[i];
            sum += weights_[i] * (sys.antideriv2(k, b) - sys.antideriv2(k, a));
        }
        return sum.value();
    }
    return integrate([this](double u) { return q(u); }, a, b, rule_).value;
}

std::vector<double> KernelAtPoint::q_cumulative(std::span<const double> grid) const {
    const SystemHandle& sys = state_->system;
    if (!sys.has_antideriv2()) return cumulative_integral([this](double u) { return q(u); }, grid, rule_);

    std::vector<double> out;
    out.reserve(grid.size());
    std::vector<double> previous(active_.size());
    for (std::size_t i = 0; i < active_.size(); ++i) previous[i] = sys.antideriv2(active_[i], 0.0);
    CompensatedSum running;
    double last = 0.0;
    for (double t : grid) {
        if (t < last) throw InvalidInterval("q_cumulative grid must be sorted");
        CompensatedSum cell;
        for (std::size_t i = 0; i < active_.size(); ++i) {
            const double a = sys.antideriv2(active_[i], t);
            cell += weights_[i] * (a - previous[i]);
            previous[i] = a;
        }
        running += cell.value();
        out.push_back(running.value());
        last = t;
    }
    return out;
}

std::vector<double> KernelAtPoint::q_prefix_integrals() const {
    const int n = state_->n;
    std::vector<double> grid(n + 1);
    for (int i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) / n;
    return q_cumulative(grid);
}

double KernelAtPoint::b_integral() const {
    const SystemHandle& sys = state_->system;
    if (sys.has_antideriv()) {
        CompensatedSum sum;
        for (std::size_t i = 0; i < active_.size(); ++i) sum += weights_[i] * sys.antideriv(active_[i], 1.0);
        return sum.value();
    }
    return integrate([this](double u) { return b(u); }, 0.0, 1.0, rule_).value;
}

double b_kernel(const KernelContext& ctx, double u, double x) { return ctx.at(x).b(u); }

double q_kernel(const KernelContext& ctx, double u, double x) { return ctx.at(x).q(u); }

double q_partial_integral(const KernelContext& ctx, double t, double x) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInterval("q_partial_integral requires t in [0,1]");
    return ctx.at(x).q_integral(0.0, t);
}

double m_functional(const KernelContext& ctx, double x) {
    const int n = ctx.n();
    if (n < 2) throw std::invalid_argument("M_n(x) requires n >= 2");
    const auto prefix = ctx.at(x).q_prefix_integrals();
    CompensatedSum sum;
    for (int i = 1; i <= n - 1; ++i) sum += std::abs(prefix[i]);
    return sum.value() / n;
}

double m_functional_naive(const KernelContext& ctx, double x) {
    const int n = ctx.n();
    if (n < 2) throw std::invalid_argument("M_n(x) requires n >= 2");
    const KernelAtPoint kp = ctx.at(x);
    CompensatedSum sum;
    for (int i = 1; i <= n - 1; ++i) sum += std::abs(kp.q_integral(0.0, static_cast<double>(i) / n));
    return sum.value() / n;
}

double bessel_sum(const KernelContext& ctx, double u) {
    CompensatedSum sum;
    for (int k = 1; k <= ctx.n(); ++k) {
        const double g = ctx.g(k, u);
        sum += g * g;
    }
    return sum.value();
}

std::vector<CellBound> q_cell_bounds(const KernelContext& ctx, double x) {
    const int n = ctx.n();
    const KernelAtPoint kp = ctx.at(x);
    const double bound = std::sqrt(kp.weight_energy()) / n;
    const std::function<double(double)> q = [&kp](double u) { return kp.q(u); };
    std::vector<CellBound> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const double a = static_cast<double>(i - 1) / n;
        const double b = static_cast<double>(i) / n;
        // |Q| is smooth between the zeros of Q, so they become panel boundaries.
        const QuadratureRule rule = kp.rule().with_breakpoints(sign_changes(q, a, b, 32));
        const double mass = integrate([&kp](double u) { return std::abs(kp.q(u)); }, a, b, rule).value;
        out.push_back({i, mass, bound});
    }
    return out;
}

} // namespace onslab
