#pragma once

#include <string>
#include <vector>

#include "gridsheet/metrics.hpp"
#include "gridsheet/ranker.hpp"

namespace gridsheet {

// Rendering assumptions used when describing sheets and when building the
// no-wrapping baseline grid (a single default-height row per line of text).
struct FontModel {
    std::string name = "Calibri";
    int size_pt = 11;
    double units_per_char = 0.65;
    double default_row_height = 15.0;
    double default_col_width = 8.43;
};

// Greedy word wrap to at most `width` characters per line. Words longer
// than the width are hard-split. Existing line breaks are treated as
// spaces. Never returns an empty vector.
std::vector<std::string> wrap_text(const std::string& text, int width);

// Smallest grid in which every data cell renders without clipping: each
// column takes the widest requirement of the cells crossing it, each row
// the tallest. Untouched tracks fall back to font defaults.
GridConfig fit_dimensions(const Sheet& layout, const MetricConstants& mc = {},
                          const FontModel& font = {});

// Widths sized to unwrapped text, all rows at the font default height:
// what a spreadsheet's column autofit produces when nothing is wrapped.
GridConfig autofit_baseline(const Sheet& layout, const MetricConstants& mc = {},
                            const FontModel& font = {});

struct PopulateConfig {
    int candidates = 3;
    MetricConstants metrics;
    WeightProfile weights;
    FontModel font;
};

// Candidate fillings: wrap widths at {1.0, 0.8, 1.2} times the median cell
// text length, each with its fitted grid attached.
std::vector<Sheet> populate_candidates(const Sheet& placed, const PopulateConfig& cfg = {});

// Best candidate by weighted total score.
Sheet populate(const Sheet& placed, const PopulateConfig& cfg = {});

}  // namespace gridsheet
