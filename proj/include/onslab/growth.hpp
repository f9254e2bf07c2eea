#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace onslab {

enum class Growth { bounded, growing, inconclusive };

[[nodiscard]] std::string_view to_string(Growth g) noexcept;

/// Empirical thresholds for telling O(1) from divergence on a finite range of
/// n. The verdict is evidence, never proof.
struct GrowthThresholds {
    /// bounded requires slope_log below this ...
    double bounded_slope = 0.05;
    /// ... and a relative increase of the running max over the last quarter of
    /// the range below this.
    double plateau = 0.01;
    /// growing iff slope_log above this.
    double growing_slope = 0.5;
    /// Sequences whose running max never exceeds this are bounded outright
    /// (numerically zero diagnostics, where relative plateau tests are noise).
    double zero_floor = 1e-9;
};

struct GrowthReport {
    std::string label;
    std::vector<int> indices;
    std::vector<double> values;
    std::vector<double> running_max;
    Growth classification = Growth::inconclusive;
    double bound_estimate = 0.0;
    /// Least-squares slope of running_max against ln n over the upper half of
    /// the indices.
    double slope_log = 0.0;
    /// Relative increase of running_max over the last quarter of the indices.
    double plateau_increase = 0.0;
};

/// Builds running max, fit statistics and classification. Requires equally
/// sized, non-empty inputs with positive, increasing indices.
GrowthReport make_growth_report(std::string label, std::vector<int> indices, std::vector<double> values,
                                const GrowthThresholds& thresholds = {});

/// Re-derives the classification of existing statistics under other thresholds.
Growth classify(const GrowthReport& report, const GrowthThresholds& thresholds);

} // namespace onslab
