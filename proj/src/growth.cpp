#include "onslab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace onslab {

std::string_view to_string(Growth g) noexcept {
    switch (g) {
    case Growth::bounded: return "bounded";
    case Growth::growing: return "growing";
    case Growth::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Growth classify(const GrowthReport& report, const GrowthThresholds& thresholds) {
    if (std::abs(report.bound_estimate) <= thresholds.zero_floor) return Growth::bounded;
    if (report.slope_log > thresholds.growing_slope) return Growth::growing;
    if (report.slope_log < thresholds.bounded_slope && report.plateau_increase < thresholds.plateau) {
        return Growth::bounded;
    }
    return Growth::inconclusive;
}

GrowthReport make_growth_report(std::string label, std::vector<int> indices, std::vector<double> values,
                                const GrowthThresholds& thresholds) {
    if (indices.empty() || indices.size() != values.size()) {
        throw std::invalid_argument("growth report needs matching, non-empty index and value lists");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 1 || (i > 0 && indices[i] <= indices[i - 1])) {
            throw std::invalid_argument("growth report indices must be positive and increasing");
        }
    }

    GrowthReport r;
    r.label = std::move(label);
    r.indices = std::move(indices);
    r.values = std::move(values);
    r.running_max.resize(r.values.size());
    double best = r.values.front();
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        best = std::max(best, r.values[i]);
        r.running_max[i] = best;
    }
    r.bound_estimate = best;

    const std::size_t size = r.indices.size();
    const std::size_t start = size / 2;
    const std::size_t count = size - start;
    if (count >= 2) {
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t i = start; i < size; ++i) {
            mx += std::log(static_cast<double>(r.indices[i]));
            my += r.running_max[i];
        }
        mx /= count;
        my /= count;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = start; i < size; ++i) {
            const double dx = std::log(static_cast<double>(r.indices[i])) - mx;
            sxy += dx * (r.running_max[i] - my);
            sxx += dx * dx;
        }
        r.slope_log = sxx > 0.0 ? sxy / sxx : 0.0;
    }

    const double quarter = r.running_max[(3 * size) / 4 < size ? (3 * size) / 4 : size - 1];
    const double last = r.running_max.back();
    r.plateau_increase = quarter != 0.0 ? (last - quarter) / std::abs(quarter) : (last > 0.0 ? 1.0 : 0.0);

    r.classification = classify(r, thresholds);
    return r;
}

} // namespace onslab
