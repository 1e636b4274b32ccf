#include "gridsheet/reflection.hpp"

namespace gridsheet {

const std::string& instruction_for(ReflectionAspect a) {
    static const std::string fullness =
        "This spreadsheet is with much empty space. Consider redistribute the elements to minimize "
        "empty space.";
    static const std::string overlap =
        "This spreadsheet has overlapping components. Consider moving the components to avoid "
        "overlapping";
    static const std::string align_h =
        "The horizontal alignment of components is not good. Consider align the top of the components";
    static const std::string align_v =
        "The vertical alignment of components is not good. Consider align the left of the components";
    static const std::string t_align_h =
        "The type-specific horizontal alignment of components is not good. Consider align the top of "
        "the components according to their types";
    static const std::string t_align_v =
        "The type-specific vertical alignment of components is not good. Consider align the left of "
        "the components according to their types";
    static const std::string r_align_h =
        "The relation-specific horizontal alignment of components is not good. Consider align the top "
        "of the components according to their relations";
    static const std::string r_align_v =
        "The relation-specific vertical alignment of components is not good. Consider align the left "
        "of the components according to their relations";
    static const std::string balance_h =
        "The horizontal balance of components is not good. Consider distribute the components "
        "horizontally";
    static const std::string balance_v =
        "The vertical balance of components is not good. Consider distribute the components vertically";
    switch (a) {
        case ReflectionAspect::fullness: return fullness;
        case ReflectionAspect::overlap: return overlap;
        case ReflectionAspect::align_h: return align_h;
        case ReflectionAspect::align_v: return align_v;
        case ReflectionAspect::t_align_h: return t_align_h;
        case ReflectionAspect::t_align_v: return t_align_v;
        case ReflectionAspect::r_align_h: return r_align_h;
        case ReflectionAspect::r_align_v: return r_align_v;
        case ReflectionAspect::balance_h: return balance_h;
        case ReflectionAspect::balance_v: return balance_v;
    }
    throw ValidationError("unknown reflection aspect");
}

const std::vector<ReflectionAspect>& all_reflection_aspects() {
    static const std::vector<ReflectionAspect> aspects = {
        ReflectionAspect::fullness,  ReflectionAspect::overlap,   ReflectionAspect::align_h,
        ReflectionAspect::align_v,   ReflectionAspect::t_align_h, ReflectionAspect::t_align_v,
        ReflectionAspect::r_align_h, ReflectionAspect::r_align_v, ReflectionAspect::balance_h,
        ReflectionAspect::balance_v,
    };
    return aspects;
}

ThresholdProfile ThresholdProfile::uniform(double level) {
    ThresholdProfile t;
    t.fullness = level;
    t.alignment = level;
    t.t_alignment = level;
    t.r_alignment = level;
    t.balance = level;
    t.overlap = 0.0;
    return t;
}

std::vector<Trigger> compute_triggers(const ScoreReport& r, const ThresholdProfile& th) {
    std::vector<Trigger> out;
    auto check = [&](ReflectionAspect a, double score, double threshold) {
        if (score < threshold) out.push_back(Trigger{a, score, threshold});
    };
    check(ReflectionAspect::fullness, r.fullness, th.fullness);
    check(ReflectionAspect::overlap, r.overlap, th.overlap);
    check(ReflectionAspect::align_h, r.align_h, th.alignment);
    check(ReflectionAspect::align_v, r.align_v, th.alignment);
    check(ReflectionAspect::t_align_h, r.t_align_h, th.t_alignment);
    check(ReflectionAspect::t_align_v, r.t_align_v, th.t_alignment);
    check(ReflectionAspect::r_align_h, r.r_align_h, th.r_alignment);
    check(ReflectionAspect::r_align_v, r.r_align_v, th.r_alignment);
    check(ReflectionAspect::balance_h, r.balance_h, th.balance);
    check(ReflectionAspect::balance_v, r.balance_v, th.balance);
    return out;
}

std::vector<std::string> ReflectionPlan::instructions() const {
    std::vector<std::string> out;
    out.reserve(triggered.size());
    for (const Trigger& t : triggered) out.push_back(instruction_for(t.aspect));
    return out;
}

ReflectionResult reflect_loop(const Sheet& layout, const RevisionGenerator& generate,
                              const ReflectionOptions& opts, const MetricConstants& mc,
                              const WeightProfile& weights) {
    if (opts.max_rounds < 0) throw ValidationError("max_rounds must be non-negative");

    ReflectionResult result;
    result.layout = layout;
    result.report = evaluate(layout, mc, weights);

    Sheet current = layout;
    ScoreReport current_report = result.report;

    for (int round = 0; round < opts.max_rounds; ++round) {
        const std::vector<Trigger> triggers = compute_triggers(current_report, opts.thresholds);
        if (triggers.empty() && !opts.force) break;

        ReflectionPlan plan;
        plan.triggered = triggers;
        plan.attach_sketch = opts.vision;
        plan.include_rules = opts.rules;
        result.round_triggers.push_back(triggers);

        current = generate(current, plan);
        require_placed(current);
        current_report = evaluate(current, mc, weights);
        ++result.rounds_run;

        if (current_report.weighted_total > result.report.weighted_total) {
            result.layout = current;
            result.report = current_report;
        }
    }
    return result;
}

}  // namespace gridsheet
