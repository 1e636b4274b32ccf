#pragma once

#include <cstdint>
#include <vector>

#include "gridsheet/sheet.hpp"

namespace gridsheet {

// Shape of generated sheets. Counts are inclusive ranges; every sheet gets
// exactly one title and at least one main table regardless of the profile.
struct SynthProfile {
    int min_main_tables = 1;
    int max_main_tables = 2;
    int min_meta = 1;
    int max_meta = 3;
    int min_summaries = 0;
    int max_summaries = 2;
    bool allow_charts = true;
    double chart_prob = 0.5;        // chance of one chart per main table
    double relation_prob = 0.8;     // chance a summary/chart is related to its table
    double long_text_prob = 0.3;    // chance a sheet carries paragraph-length cells
    int max_table_rows = 8;
    int max_table_cols = 6;
};

// Deterministic: the same (seed, n, profile) always yields byte-identical
// sheets, independent of the standard library's distribution internals.
std::vector<Sheet> synth_corpus(uint64_t seed, int n, const SynthProfile& profile = {});

}  // namespace gridsheet
