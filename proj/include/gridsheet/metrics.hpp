#pragma once

#include <optional>
#include <utility>

#include "gridsheet/sheet.hpp"

namespace gridsheet {

// How per-cell compatibility ratios aggregate into a score. The default
// penalizes the mean absolute deviation of each ratio from 1; the
// alternative keeps the sum-then-deviate form behind a switch.
enum class CompatAggregation { mean_abs_deviation, literal_sum };

struct MetricConstants {
    double theta_full = 0.8;      // coverage ratio at or above this caps fullness at 1
    double text_char_px = 12.0;   // horizontal pixels per character
    double text_line_px = 15.0;   // vertical pixels per text line
    double pad_h_px = 40.0;       // horizontal padding per cell
    double pad_v_px = 10.0;       // vertical padding per cell
    double col_unit_px = 7.0;     // pixels per spreadsheet column-width unit
    int top_k = 3;                // alignment anchor count
    CompatAggregation compat_aggregation = CompatAggregation::mean_abs_deviation;
};

struct ScoreReport {
    double fullness = 0.0;
    std::optional<double> compat_h;  // absent until a grid config exists
    std::optional<double> compat_v;
    double align_h = 0.0;
    double align_v = 0.0;
    double t_align_h = 0.0;
    double t_align_v = 0.0;
    double r_align_h = 0.0;
    double r_align_v = 0.0;
    double balance_h = 0.0;
    double balance_v = 0.0;
    double overlap = 0.0;
    double weighted_total = 0.0;
};

std::string serialize_report(const ScoreReport& r);

// Covered share of the layout's bounding box. Cell areas are weighted by
// the grid config (unit grid when absent); overlapping components count
// each covered cell once. Ratios >= theta_full score 1.
double fullness(const Sheet& layout, const MetricConstants& c);

// (horizontal, vertical) fit between cell extents and their content.
// Requires a grid config; a layout with no data cells scores (1, 1).
std::pair<double, double> compatibility(const Sheet& layout, const MetricConstants& c);

// (horizontal, vertical) edge alignment. Horizontal uses top edges,
// vertical uses left edges. Anchors are the top_k coordinates shared by at
// least two components (ties prefer the smaller coordinate); when no
// coordinate repeats the single most frequent position is the anchor.
// Components off every anchor count as violations:
//   score = 1 / (1 + violations / N).
std::pair<double, double> component_alignment(const Sheet& layout, const MetricConstants& c);

// component_alignment within same-type groups of size >= 2, averaged
// across groups. No such group -> (1, 1).
std::pair<double, double> type_alignment(const Sheet& layout, const MetricConstants& c);

// component_alignment within connected components of the relation graph,
// averaged. Empty relations -> (1, 1); dangling ids are errors.
std::pair<double, double> relation_alignment(const Sheet& layout, const std::vector<Relation>& relations,
                                             const MetricConstants& c);

// Halves of the bounding box about its vertical midline (horizontal score)
// or horizontal midline (vertical score). Components spanning a midline
// are split proportionally by area; each half's fullness F feeds
//   score = 1 - |F_a - F_b| / (F_a + F_b),
// floored at 1e-6 so the (0, 1] range holds. Degenerate one-column or
// one-row boxes score 1 in their direction.
std::pair<double, double> balance(const Sheet& layout, const MetricConstants& c);

// -C^2 / N where C counts twice the intersecting unordered pairs. 0 iff
// no two components share a cell.
double overlap_score(const Sheet& layout);

struct WeightProfile;  // ranker.hpp

// Full report. Compatibility is computed only when the layout carries a
// grid config; weighted_total follows the ranker weights.
ScoreReport evaluate(const Sheet& layout, const MetricConstants& c);
ScoreReport evaluate(const Sheet& layout, const MetricConstants& c, const WeightProfile& w);

}  // namespace gridsheet
