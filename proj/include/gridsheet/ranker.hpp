#pragma once

#include <cstddef>
#include <vector>

#include "gridsheet/metrics.hpp"

namespace gridsheet {

// Aspect weights for the combined score. Whole aspects carry weight 1,
// split across their two directions at 0.5 each; a layout that is perfect
// everywhere totals 6.
struct WeightProfile {
    double fullness = 1.0;
    double compat_h = 0.5;
    double compat_v = 0.5;
    double align_h = 0.5;
    double align_v = 0.5;
    double t_align_h = 0.5;
    double t_align_v = 0.5;
    double r_align_h = 0.5;
    double r_align_v = 0.5;
    double balance_h = 0.5;
    double balance_v = 0.5;
    double overlap = 1.0;
};

// Absent compatibility scores contribute nothing (their weight is treated
// as zero), which is how candidates are ranked before population.
double weighted_total(const ScoreReport& r, const WeightProfile& w = {});

// Index of the best report by weighted_total; ties keep the lowest index.
// Empty input is an error.
size_t rank(const std::vector<ScoreReport>& reports, const WeightProfile& w = {});

}  // namespace gridsheet
