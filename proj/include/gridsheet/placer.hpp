#pragma once

#include <cstdint>
#include <vector>

#include "gridsheet/metrics.hpp"
#include "gridsheet/ranker.hpp"

namespace gridsheet {

// Per-type resize rules. Titles resize freely; charts resize freely when
// allowed but keep their aspect within a factor band of the natural shape;
// main tables may only grow extra (empty) rows; metadata and summaries are
// fixed.
struct ResizePolicy {
    bool allow_chart_resize = true;
    double chart_aspect_min = 0.5;
    double chart_aspect_max = 2.0;
};

// Throws ValidationError when `proposed` violates the component's rule.
void validate_resize(const Component& c, const CellRect& proposed, const ResizePolicy& policy = {});

// Every component placed at positive coordinates with a rule-conforming
// rect. Overlap is not checked here; it is a separate score.
void validate_layout(const Sheet& layout, const ResizePolicy& policy = {});

struct PlacementConfig {
    uint64_t seed = 0;
    int candidates = 3;
    int margin = 1;               // empty rows/cols between unrelated neighbors; related touch
    int local_search_iters = 500;
    int max_rows = 400;
    int max_cols = 120;
    double width_factor = 1.0;    // scales the packing width target
    ResizePolicy resize;
    MetricConstants metrics;
    WeightProfile weights;
};

// Deterministic heuristic: the title banners the top spanning all active
// columns, relation groups stack together (summary under its table), same
// type groups pack onto shared shelves, then seeded hill-climbing improves
// the weighted total without ever introducing overlap.
Sheet heuristic_place(const Sheet& processed, const PlacementConfig& cfg = {});

// cfg.candidates placements from varied seeds and width targets.
std::vector<Sheet> generate_candidates(const Sheet& processed, const PlacementConfig& cfg = {});

// Uniform-random valid placement (no overlap, natural sizes). The
// comparison baseline for the heuristic.
Sheet random_place(const Sheet& processed, const PlacementConfig& cfg = {});

}  // namespace gridsheet
