#include "onslab/cli.hpp"
#include "onslab/functions.hpp"
#include "onslab/systems.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

namespace onslab::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 14> kCommandNames{{
    {Command::gram, "gram"},
    {Command::bessel, "bessel"},
    {Command::lemma1, "lemma1"},
    {Command::lemma3, "lemma3"},
    {Command::lemma4, "lemma4"},
    {Command::eq11, "eq11"},
    {Command::mn_sweep, "mn-sweep"},
    {Command::partial_sums, "partial-sums"},
    {Command::e_phi, "e-phi"},
    {Command::theorem2, "theorem2"},
    {Command::theorem3_extremal, "theorem3-extremal"},
    {Command::theorem4_moments, "theorem4-moments"},
    {Command::theorem5, "theorem5"},
    {Command::theorem6, "theorem6"},
}};

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidConfig(message);
}

std::vector<double> nine_point_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(i / 8.0);
    return grid;
}

std::vector<double> standard_grid() { return {0.0, 0.3, 1.0 / std::sqrt(2.0), 1.0}; }

} // namespace

std::string_view to_string(Command c) noexcept {
    for (const auto& [cmd, name] : kCommandNames) {
        if (cmd == c) return name;
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
    for (const auto& [cmd, text] : kCommandNames) {
        if (text == name) return cmd;
    }
    return std::nullopt;
}

ExperimentConfig resolve(ExperimentConfig c) {
    // Name lookups throw UnknownSystem / UnknownFunction.
    (void)system_by_name(c.system);
    if (c.command == Command::theorem4_moments) (void)system_by_name(c.base);
    if (c.function) (void)function_by_name(*c.function);

    const bool theorem_sweep = c.command == Command::theorem5 || c.command == Command::theorem6;
    if (c.command == Command::theorem5) c.system = "cosine";
    if (c.command == Command::theorem6) c.system = "haar";

    if (c.x_points.empty()) {
        if (theorem_sweep || c.command == Command::lemma3) {
            c.x_points = standard_grid();
        } else if (c.command == Command::lemma4) {
            c.x_points = nine_point_grid();
        } else {
            c.x_points = {0.3};
        }
    }
    for (double x : c.x_points) {
        require(std::isfinite(x) && x >= 0.0 && x <= 1.0, "x: every point must lie in [0,1]");
    }

    if (!c.n_max) {
        switch (c.command) {
        case Command::bessel: c.n_max = 256; break;
        case Command::lemma4: c.n_max = 64; break;
        case Command::eq11: c.n_max = 32; break;
        case Command::theorem3_extremal: c.n_max = 16; break;
        case Command::theorem4_moments: c.n_max = 64; break;
        case Command::theorem5:
        case Command::theorem6: c.n_max = 512; break;
        case Command::mn_sweep:
        case Command::theorem2:
        case Command::lemma1:
        case Command::e_phi: c.n_max = 256; break;
        default: c.n_max = 64; break;
        }
    }
    require(*c.n_max >= 1, "n-max: must be at least 1");
    if (c.n) require(*c.n >= 1, "n: must be at least 1");

    switch (c.command) {
    case Command::gram:
        if (!c.n) c.n = 8;
        break;
    case Command::lemma3:
        if (!c.n) c.n = 16;
        break;
    case Command::lemma4:
        require(c.function.has_value(), "function: lemma4 requires a CL function");
        require(function_by_name(*c.function).class_tag == FunctionClass::cl,
                "function: lemma4 requires a function of class CL");
        break;
    case Command::eq11:
        require(c.function.has_value(), "function: eq11 requires a function with a derivative");
        require(function_by_name(*c.function).has_deriv(), "function: eq11 requires a function with a derivative");
        require(c.weight == "one" || c.weight == "q-kernel", "weight: expected one or q-kernel");
        require(c.kernel_n >= 1, "kernel-n: must be at least 1");
        if (c.n) require(*c.n >= 2, "n: eq11 requires n >= 2");
        require(*c.n_max >= 2, "n-max: eq11 requires n-max >= 2");
        break;
    case Command::mn_sweep:
        if (c.n) require(*c.n >= 2, "n: M_n requires n >= 2");
        require(*c.n_max >= 2, "n-max: M_n requires n-max >= 2");
        break;
    case Command::partial_sums:
    case Command::e_phi:
        if (!c.function) c.function = "id";
        break;
    case Command::theorem2:
        if (!c.function) c.function = "cos-bump";
        require(function_by_name(*c.function).class_tag == FunctionClass::cl,
                "function: theorem2 requires a function of class CL");
        require(*c.n_max >= 8, "n-max: theorem2 requires n-max >= 8");
        break;
    case Command::theorem3_extremal:
        require(std::isfinite(c.t) && c.t >= 0.0 && c.t <= 1.0, "t: must lie in [0,1]");
        require(c.grid_size >= 64, "grid-size: must be at least 64");
        require(*c.n_max >= 2 || c.n.has_value(), "n-max: must be at least 2");
        break;
    case Command::theorem5:
    case Command::theorem6:
        require(*c.n_max >= 8, "n-max: M_n sweeps require n-max >= 8");
        break;
    default: break;
    }

    if (c.tolerance) require(std::isfinite(*c.tolerance) && *c.tolerance > 0.0, "tol: must be positive");
    const auto& th = c.thresholds;
    require(th.bounded_slope >= 0.0 && th.growing_slope >= th.bounded_slope,
            "growing-slope: must not be below bounded-slope");
    require(th.plateau >= 0.0, "plateau: must be non-negative");
    return c;
}

std::string column_reference() {
    return R"(Commands and CSV columns (JSON rows carry the same keys):
  gram               j,k,inner_product,deviation          n x n Gram matrix (--n)
  bessel             u,n,bessel_sum,slack                 sum_k g_k(u)^2 on 33 points (--n-max)
  lemma1             x,n,value,running_max                n^{1/2} n^{-2} sum phi_k(x)^2
  lemma3             x,n,cell,abs_integral,bound,slack    per-cell L1 mass of Q_n (--n)
  lemma4             x,n,lhs,term_b,term_q,residual       S_n = f(1) int B_n - int f' Q_n (--function)
  eq11               n,lhs,rhs,residual,residual_alt      summation by parts (--function, --weight)
  mn-sweep           x,n,M_n,running_max                  M_n(x) for n = 2..n-max
  partial-sums       x,n,coefficient,partial_sum          C_n(f) and S_n(x,f)
  e-phi              x,n,abs_partial_sum,running_max      |S_n(x,f)|
  theorem2           x,n,s_q,s_p,m_n,s_f                  hypotheses and conclusion for f in CL
  theorem3-extremal  n,direct,s1,s2,s3,residual,m_n,lipschitz,value_at_0
  theorem4-moments   n,c_q,c_p,mean_phi,c_f_base,c_g_phi,c_h_g,c_g_g,halving_residual
  theorem5           x,n,M_n,running_max                  cosine system
  theorem6           x,n,M_n,running_max                  Haar system
Numbers are printed with 17 significant digits. In CSV mode the summary goes
to stderr; in JSON mode the output is one object {config, rows, summary}.
Exit status: 0 ok, 1 usage error, 2 invariant check failed.
)";
}

std::optional<ExperimentConfig> parse_arguments(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Numerical experiments with orthonormal systems on [0,1]", "onslab"};
    app.footer(column_reference());
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.set_config("--config", "", "Flat key=value file; keys are long option names");

    ExperimentConfig c;
    std::string command;
    std::string format = "csv";
    std::string upper = "n";
    std::optional<std::string> function;
    int n = 0;
    int n_max = 0;
    double tol = 0.0;

    app.add_option("command", command, "Experiment to run")->required();
    app.add_option("--system", c.system, "cosine, haar, rademacher, reflect(<name>), reflect2(<name>)");
    app.add_option("--function", function, "one, id, cos-bump, g-compressed, h-compressed, half-square");
    app.add_option("--base", c.base, "Base system of theorem4-moments");
    app.add_option("--x", c.x_points, "Evaluation points in [0,1], comma separated")->delimiter(',');
    auto* n_opt = app.add_option("--n", n, "Single order");
    auto* n_max_opt = app.add_option("--n-max", n_max, "Largest order of a sweep");
    app.add_option("--t", c.t, "Point of the extremal sequence");
    app.add_option("--grid-size", c.grid_size, "Grid of the extremal sequence");
    app.add_option("--eq11-upper", upper, "Last cell of the within-cell sum: n or n-1");
    app.add_option("--weight", c.weight, "eq11 weight: one or q-kernel");
    app.add_option("--kernel-n", c.kernel_n, "Order of the q-kernel weight");
    auto* tol_opt = app.add_option("--tol", tol, "Invariant tolerance override");
    app.add_option("--bounded-slope", c.thresholds.bounded_slope, "Slope below which a sweep may be bounded");
    app.add_option("--growing-slope", c.thresholds.growing_slope, "Slope above which a sweep is growing");
    app.add_option("--plateau", c.thresholds.plateau, "Largest relative increase over the last quarter");
    app.add_option("--format", format, "csv or json");
    app.add_option("--output", c.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw InvalidConfig(e.what());
    }

    const auto cmd = parse_command(command);
    require(cmd.has_value(), "command: unknown command '" + command + "'");
    c.command = *cmd;
    c.function = function;
    if (n_opt->count() > 0) c.n = n;
    if (n_max_opt->count() > 0) c.n_max = n_max;
    if (tol_opt->count() > 0) c.tolerance = tol;

    if (format == "csv") {
        c.format = Format::csv;
    } else if (format == "json") {
        c.format = Format::json;
    } else {
        throw InvalidConfig("format: expected csv or json, got '" + format + "'");
    }
    if (upper == "n") {
        c.eq11_upper = CellSumUpper::n;
    } else if (upper == "n-1") {
        c.eq11_upper = CellSumUpper::n_minus_1;
    } else {
        throw InvalidConfig("eq11-upper: expected n or n-1, got '" + upper + "'");
    }
    return c;
}

} // namespace onslab::cli
