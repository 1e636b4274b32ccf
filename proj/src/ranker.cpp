#include "gridsheet/ranker.hpp"

#include "gridsheet/errors.hpp"

namespace gridsheet {

double weighted_total(const ScoreReport& r, const WeightProfile& w) {
    double total = w.fullness * r.fullness + w.overlap * r.overlap;
    if (r.compat_h) total += w.compat_h * *r.compat_h;
    if (r.compat_v) total += w.compat_v * *r.compat_v;
    total += w.align_h * r.align_h + w.align_v * r.align_v;
    total += w.t_align_h * r.t_align_h + w.t_align_v * r.t_align_v;
    total += w.r_align_h * r.r_align_h + w.r_align_v * r.r_align_v;
    total += w.balance_h * r.balance_h + w.balance_v * r.balance_v;
    return total;
}

size_t rank(const std::vector<ScoreReport>& reports, const WeightProfile& w) {
    if (reports.empty()) throw ValidationError("rank called with no candidates");
    size_t best = 0;
    double best_total = weighted_total(reports[0], w);
    for (size_t i = 1; i < reports.size(); ++i) {
        const double t = weighted_total(reports[i], w);
        if (t > best_total) {
            best = i;
            best_total = t;
        }
    }
    return best;
}

}  // namespace gridsheet
