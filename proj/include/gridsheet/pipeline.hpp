#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridsheet/llm.hpp"
#include "gridsheet/metrics.hpp"
#include "gridsheet/placer.hpp"
#include "gridsheet/populator.hpp"
#include "gridsheet/ranker.hpp"
#include "gridsheet/reflection.hpp"
#include "gridsheet/sheet.hpp"

namespace gridsheet {

enum class GeneratorKind { heuristic, llm };

std::string to_string(GeneratorKind g);
GeneratorKind generator_from_string(const std::string& s);

// Knobs for one end-to-end run. `seed`, `place_candidates` and
// `populate_candidates` override the corresponding fields inside the stage
// configs so one flag steers the whole run.
struct PipelineOptions {
    uint64_t seed = 0;
    int place_candidates = 3;
    int populate_candidates = 3;
    bool reflect = true;
    GeneratorKind generator = GeneratorKind::heuristic;
    ChatProvider* provider = nullptr;  // required for the llm generator
    std::string exemplar_dir;          // topic exemplar images, optional

    ReflectionOptions reflection;
    PlacementConfig placement;
    PopulateConfig population;
    MetricConstants metrics;
    WeightProfile weights;
};

struct StageTiming {
    std::string stage;
    double ms = 0.0;
};

struct PipelineResult {
    Sheet layout;                // placed, populated, scored
    ScoreReport report;
    TokenLedger tokens;
    int reflection_rounds = 0;
    bool preprocess_ran = false;  // false when the input arrived typed
    long long http_requests = 0;  // attempted during this run, process-wide
    std::vector<StageTiming> timings;
};

// preprocess -> place candidates -> rank -> reflect -> populate candidates
// -> rank -> final score. Deterministic for a fixed seed with the heuristic
// generator or any pure provider.
PipelineResult run_pipeline(const Sheet& input, const PipelineOptions& opts = {});

// Reproducibility sidecar written next to every output. Carries the seed,
// thresholds, candidate counts, generator and provider identity (never
// secrets), per-stage timings, token spend and the final scores.
std::string manifest_json(const PipelineResult& result, const PipelineOptions& opts,
                          const ProviderConfig* provider_cfg = nullptr);

// Benchmark generators. `random` is the unranked single-shot baseline
// placer; it skips reflection by construction.
enum class BenchGenerator { heuristic, random, llm };

std::string to_string(BenchGenerator g);
BenchGenerator bench_generator_from_string(const std::string& s);

struct BenchOptions {
    std::vector<BenchGenerator> generators = {BenchGenerator::heuristic};
    PipelineOptions pipeline;
    int workers = 0;             // 0: one per hardware thread
    std::vector<double> tails;   // extra rows over the lowest-scoring fraction
};

// One aggregate row: mean aspect scores over `sheets` runs.
struct BenchRow {
    std::string generator;
    std::string label;  // "mean" or "tail p%"
    int sheets = 0;
    double fullness = 0.0;
    double compat_h = 0.0;
    double compat_v = 0.0;
    double align_h = 0.0;
    double align_v = 0.0;
    double t_align_h = 0.0;
    double t_align_v = 0.0;
    double r_align_h = 0.0;
    double r_align_v = 0.0;
    double balance_h = 0.0;
    double balance_v = 0.0;
    double overlap = 0.0;
    double total = 0.0;
};

struct BenchFailure {
    size_t sheet_index = 0;
    std::string generator;
    std::string error;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchFailure> failures;

    std::string csv() const;
    std::string to_json() const;
};

// Runs every generator over the corpus with a worker pool. Per-sheet
// failures are recorded and the run continues; aggregation is sequential
// so results do not depend on scheduling.
BenchReport run_bench(const std::vector<Sheet>& corpus, const BenchOptions& opts = {});

}  // namespace gridsheet
