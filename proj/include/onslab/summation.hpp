#pragma once

#include <cmath>

namespace onslab {

/// Neumaier's variant of Kahan summation. Kernel sums run over hundreds of
/// oscillating terms, so the running compensation matters at n ~ 512.
class CompensatedSum {
public:
    CompensatedSum& operator+=(double term) noexcept {
        const double t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            compensation_ += (sum_ - t) + term;
        } else {
            compensation_ += (term - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

} // namespace onslab
