#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gridsheet/metrics.hpp"
#include "gridsheet/ranker.hpp"

namespace gridsheet {

// Aspects that can demand a revision. Compatibility never does: revision
// happens before content population.
enum class ReflectionAspect {
    fullness,
    overlap,
    align_h,
    align_v,
    t_align_h,
    t_align_v,
    r_align_h,
    r_align_v,
    balance_h,
    balance_v,
};

// Revision instruction attached to each aspect. The strings are part of
// the prompt contract and must not drift.
const std::string& instruction_for(ReflectionAspect a);
const std::vector<ReflectionAspect>& all_reflection_aspects();

// Scores strictly below their threshold trigger; any overlap (score below
// zero) always triggers.
struct ThresholdProfile {
    double fullness = 0.5;
    double overlap = 0.0;
    double alignment = 0.5;
    double t_alignment = 0.5;
    double r_alignment = 0.5;
    double balance = 0.5;

    // Sweep preset: every threshold except overlap's set to `level`.
    static ThresholdProfile uniform(double level);
};

struct Trigger {
    ReflectionAspect aspect;
    double score = 0.0;
    double threshold = 0.0;
};

// Triggers in catalog order for all sub-threshold aspects.
std::vector<Trigger> compute_triggers(const ScoreReport& report, const ThresholdProfile& thresholds);

struct ReflectionPlan {
    std::vector<Trigger> triggered;
    bool attach_sketch = true;   // vision pass wants the rendered layout image
    bool include_rules = true;   // rule pass inlines the per-aspect instructions

    std::vector<std::string> instructions() const;
};

struct ReflectionOptions {
    ThresholdProfile thresholds;
    int max_rounds = 1;
    bool rules = true;    // include per-aspect instruction strings
    bool vision = true;   // attach the sketch image
    bool force = false;   // revise even when nothing triggers
};

// Proposes a revised layout for a plan. Implementations range from an LLM
// round-trip to a deterministic local-search improver.
using RevisionGenerator = std::function<Sheet(const Sheet&, const ReflectionPlan&)>;

struct ReflectionResult {
    Sheet layout;          // best layout seen, input included
    ScoreReport report;    // its scores
    int rounds_run = 0;    // generator invocations
    std::vector<std::vector<Trigger>> round_triggers;
};

// Iterates score -> trigger -> revise up to max_rounds, keeping the best
// layout by weighted total. Skips revision entirely when nothing triggers
// (unless forced). The result never scores below the input.
ReflectionResult reflect_loop(const Sheet& layout, const RevisionGenerator& generate,
                              const ReflectionOptions& opts, const MetricConstants& mc = {},
                              const WeightProfile& weights = {});

}  // namespace gridsheet
