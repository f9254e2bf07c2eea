#pragma once

#include "onslab/fourier.hpp"
#include "onslab/growth.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace onslab::cli {

enum class Command {
    gram,
    bessel,
    lemma1,
    lemma3,
    lemma4,
    eq11,
    mn_sweep,
    partial_sums,
    e_phi,
    theorem2,
    theorem3_extremal,
    theorem4_moments,
    theorem5,
    theorem6,
};

enum class Format { csv, json };

[[nodiscard]] std::string_view to_string(Command c) noexcept;
[[nodiscard]] std::optional<Command> parse_command(std::string_view name) noexcept;

/// Raised for unusable configurations; the message names the offending field.
class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One experiment. Unset optionals take per-command defaults in resolve().
struct ExperimentConfig {
    Command command = Command::gram;
    std::string system = "cosine";
    std::optional<std::string> function;
    std::string base = "cosine";
    std::vector<double> x_points;
    std::optional<int> n;
    std::optional<int> n_max;
    double t = 0.3;
    int grid_size = 1024;
    CellSumUpper eq11_upper = CellSumUpper::n;
    std::string weight = "one";
    int kernel_n = 8;
    std::optional<double> tolerance;
    GrowthThresholds thresholds;
    Format format = Format::csv;
    std::string output;
};

/// Fills per-command defaults and checks command-specific requirements.
/// Throws InvalidConfig, UnknownSystem or UnknownFunction.
ExperimentConfig resolve(ExperimentConfig config);

/// Parses argv (argv[0] is the program name). Flags override values from a
/// --config key=value file, which override defaults. Throws InvalidConfig on
/// malformed input. Returns std::nullopt after printing --help to `out`.
std::optional<ExperimentConfig> parse_arguments(int argc, const char* const* argv, std::ostream& out);

/// Runs a resolved or unresolved config, writing the table (CSV or JSON) to
/// `out` or to config.output. Returns 0 on success, 2 when an invariant check
/// of the command fails. Summary lines go to `err` in CSV mode.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry: parsing, running, error reporting. Exit codes 0
/// (ok), 1 (usage or configuration error), 2 (invariant check failed).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Column layout of every command, as printed by --help.
std::string column_reference();

} // namespace onslab::cli
