#pragma once

// Internal helper: trailing norm-history of a matrix flow, used to attach
// growth diagnostics to divergence and non-convergence reports.

#include "cgcare/errors.hpp"

#include <cmath>
#include <cstddef>
#include <deque>
#include <utility>

namespace cgcare::detail {

class GrowthTracker {
public:
    explicit GrowthTracker(size_t capacity = 64) : capacity_(capacity) {}

    void record(double t, double norm) {
        history_.emplace_back(t, norm);
        if (history_.size() > capacity_) history_.pop_front();
    }

    /// Average d(norm)/dt over the retained window.
    double rate() const {
        if (history_.size() < 2) return 0.0;
        const double dt = history_.back().first - history_.front().first;
        if (dt <= 0.0) return 0.0;
        return (history_.back().second - history_.front().second) / dt;
    }

    /// Compares the slopes of the two halves of the window.
    GrowthClass classify() const {
        if (history_.size() < 4) return GrowthClass::linear;
        const size_t mid = history_.size() / 2;
        const auto slope = [this](size_t lo, size_t hi) {
            const double dt = history_[hi].first - history_[lo].first;
            return dt > 0.0 ? (history_[hi].second - history_[lo].second) / dt : 0.0;
        };
        const double s1 = slope(0, mid);
        const double s2 = slope(mid, history_.size() - 1);
        if (std::abs(s2) < 1e-8 || std::abs(s2) <= 0.5 * std::abs(s1)) {
            return GrowthClass::decaying;
        }
        if (std::abs(s2) >= 2.0 * std::abs(s1)) return GrowthClass::superlinear;
        return GrowthClass::linear;
    }

private:
    size_t capacity_;
    std::deque<std::pair<double, double>> history_;
};

}  // namespace cgcare::detail
