#include "gridsheet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "json.hpp"

namespace gridsheet {

using nlohmann::json;

std::string to_string(GeneratorKind g) {
    return g == GeneratorKind::heuristic ? "heuristic" : "llm";
}

GeneratorKind generator_from_string(const std::string& s) {
    if (s == "heuristic") return GeneratorKind::heuristic;
    if (s == "llm") return GeneratorKind::llm;
    throw ValidationError("unknown generator \"" + s + "\" (expected heuristic or llm)");
}

std::string to_string(BenchGenerator g) {
    switch (g) {
        case BenchGenerator::heuristic: return "heuristic";
        case BenchGenerator::random: return "random";
        case BenchGenerator::llm: return "llm";
    }
    return "heuristic";
}

BenchGenerator bench_generator_from_string(const std::string& s) {
    if (s == "heuristic") return BenchGenerator::heuristic;
    if (s == "random") return BenchGenerator::random;
    if (s == "llm") return BenchGenerator::llm;
    throw ValidationError("unknown generator \"" + s + "\" (expected heuristic, random or llm)");
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
        .count();
}

bool is_processed(const Sheet& s) {
    try {
        require_processed(s);
        return true;
    } catch (const ValidationError&) {
        return false;
    }
}

std::optional<std::string> load_exemplar(const PipelineOptions& opts, const std::string& topic,
                                         uint64_t pick_seed) {
    if (opts.exemplar_dir.empty() || !opts.provider || !opts.provider->vision_capable())
        return std::nullopt;
    ExemplarStore store;
    store.discover(opts.exemplar_dir);
    auto ref = store.pick(topic, pick_seed);
    if (!ref) return std::nullopt;
    std::ifstream in(*ref, std::ios::binary);
    if (!in.good()) throw IoError("cannot read exemplar image: " + *ref);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return base64_encode(bytes);
}

size_t pick_best(const std::vector<Sheet>& candidates, const MetricConstants& mc,
                 const WeightProfile& weights) {
    std::vector<ScoreReport> reports;
    reports.reserve(candidates.size());
    for (const auto& c : candidates) reports.push_back(evaluate(c, mc, weights));
    return rank(reports, weights);
}

// Re-raises stage failures with the stage name while keeping the error
// category (and with it the process exit code) intact.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(std::string(name) + " stage: " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(name) + " stage: " + e.what());
    } catch (const IoError& e) {
        throw IoError(std::string(name) + " stage: " + e.what());
    } catch (const ProviderError& e) {
        throw ProviderError(std::string(name) + " stage: " + e.what());
    }
}

}  // namespace

PipelineResult run_pipeline(const Sheet& input, const PipelineOptions& opts) {
    if (opts.generator == GeneratorKind::llm && !opts.provider)
        throw ProviderError("the llm generator needs a configured provider");
    if (opts.place_candidates < 1 || opts.populate_candidates < 1)
        throw ValidationError("candidate counts must be at least 1");

    const long long http_before = HttpChatProvider::attempted_requests();
    PipelineResult result;
    const bool use_llm = opts.generator == GeneratorKind::llm;

    // Pre-processing: skipped when the input already arrives typed.
    auto t0 = std::chrono::steady_clock::now();
    Sheet processed = stage("pre-process", [&] {
        if (is_processed(input)) return input;
        result.preprocess_ran = true;
        return use_llm ? llm_preprocess(input, *opts.provider, &result.tokens)
                       : heuristic_preprocess(input);
    });
    result.timings.push_back({"pre_process", elapsed_ms(t0)});

    // Structure placement: N1 candidates, keep the ranked best.
    t0 = std::chrono::steady_clock::now();
    PlacementConfig place_cfg = opts.placement;
    place_cfg.seed = opts.seed;
    place_cfg.candidates = opts.place_candidates;
    Sheet layout = stage("structure", [&] {
        std::vector<Sheet> skeletons;
        if (use_llm) {
            for (int i = 0; i < opts.place_candidates; ++i) {
                auto exemplar = load_exemplar(opts, *processed.topic, opts.seed + i);
                skeletons.push_back(llm_place(processed, *opts.provider, &result.tokens,
                                              place_cfg.resize, exemplar ? &*exemplar : nullptr));
            }
        } else {
            skeletons = generate_candidates(processed, place_cfg);
        }
        return skeletons[pick_best(skeletons, opts.metrics, opts.weights)];
    });
    result.timings.push_back({"structure", elapsed_ms(t0)});

    // Dual reflection on the chosen skeleton.
    t0 = std::chrono::steady_clock::now();
    if (opts.reflect) {
        layout = stage("reflect", [&] {
            RevisionGenerator revise;
            if (use_llm) {
                revise = [&](const Sheet& current, const ReflectionPlan& plan) {
                    return llm_revise(current, plan, *opts.provider, &result.tokens,
                                      place_cfg.resize);
                };
            } else {
                auto round = std::make_shared<uint64_t>(0);
                revise = [&, round](const Sheet& current, const ReflectionPlan&) {
                    PlacementConfig retry = place_cfg;
                    retry.seed = opts.seed + 7919 * ++*round;  // fresh deterministic attempt
                    return heuristic_place(current, retry);
                };
            }
            ReflectionResult reflected =
                reflect_loop(layout, revise, opts.reflection, opts.metrics, opts.weights);
            result.reflection_rounds = reflected.rounds_run;
            return reflected.layout;
        });
    }
    result.timings.push_back({"reflect", elapsed_ms(t0)});

    // Content population: N2 candidates, keep the ranked best.
    t0 = std::chrono::steady_clock::now();
    PopulateConfig pop_cfg = opts.population;
    pop_cfg.candidates = opts.populate_candidates;
    pop_cfg.metrics = opts.metrics;
    pop_cfg.weights = opts.weights;
    result.layout = stage("content", [&] {
        std::vector<Sheet> filled;
        if (use_llm) {
            for (int i = 0; i < opts.populate_candidates; ++i)
                filled.push_back(llm_populate(layout, *opts.provider, &result.tokens));
        } else {
            filled = populate_candidates(layout, pop_cfg);
        }
        return filled[pick_best(filled, opts.metrics, opts.weights)];
    });
    result.timings.push_back({"content", elapsed_ms(t0)});

    result.report = evaluate(result.layout, opts.metrics, opts.weights);
    result.http_requests = HttpChatProvider::attempted_requests() - http_before;
    return result;
}

namespace {

json usage_json(const TokenUsage& u) {
    return {{"prompt_tokens", u.prompt_tokens},
            {"completion_tokens", u.completion_tokens},
            {"total", u.total()}};
}

json report_json(const ScoreReport& r) {
    json j = {{"fullness", r.fullness},
              {"align_h", r.align_h},
              {"align_v", r.align_v},
              {"t_align_h", r.t_align_h},
              {"t_align_v", r.t_align_v},
              {"r_align_h", r.r_align_h},
              {"r_align_v", r.r_align_v},
              {"balance_h", r.balance_h},
              {"balance_v", r.balance_v},
              {"overlap", r.overlap},
              {"weighted_total", r.weighted_total}};
    if (r.compat_h) j["compat_h"] = *r.compat_h;
    if (r.compat_v) j["compat_v"] = *r.compat_v;
    return j;
}

}  // namespace

std::string manifest_json(const PipelineResult& result, const PipelineOptions& opts,
                          const ProviderConfig* provider_cfg) {
    json manifest;
    manifest["seed"] = opts.seed;
    manifest["generator"] = to_string(opts.generator);
    manifest["reflect"] = opts.reflect;
    manifest["preprocess_ran"] = result.preprocess_ran;
    manifest["candidates"] = {{"place", opts.place_candidates},
                              {"populate", opts.populate_candidates}};
    manifest["thresholds"] = {{"fullness", opts.reflection.thresholds.fullness},
                              {"overlap", opts.reflection.thresholds.overlap},
                              {"alignment", opts.reflection.thresholds.alignment},
                              {"t_alignment", opts.reflection.thresholds.t_alignment},
                              {"r_alignment", opts.reflection.thresholds.r_alignment},
                              {"balance", opts.reflection.thresholds.balance}};
    manifest["reflection"] = {{"max_rounds", opts.reflection.max_rounds},
                              {"rules", opts.reflection.rules},
                              {"vision", opts.reflection.vision},
                              {"rounds_run", result.reflection_rounds}};

    if (opts.provider) {
        json p = {{"name", opts.provider->name()},
                  {"vision", opts.provider->vision_capable()}};
        if (provider_cfg) {
            // Identity only; the credential stays in the environment.
            p["endpoint"] = provider_cfg->endpoint;
            p["model"] = provider_cfg->model;
            p["auth_env"] = provider_cfg->auth_env;
        }
        manifest["provider"] = p;
    } else {
        manifest["provider"] = nullptr;
    }

    json timings = json::object();
    for (const auto& t : result.timings) timings[t.stage] = t.ms;
    manifest["timings_ms"] = timings;
    manifest["tokens"] = {{"pre_process", usage_json(result.tokens.pre_process)},
                          {"structure", usage_json(result.tokens.structure)},
                          {"revise", usage_json(result.tokens.revise)},
                          {"content", usage_json(result.tokens.content)},
                          {"total", usage_json(result.tokens.total())}};
    manifest["http_requests"] = result.http_requests;
    manifest["score"] = report_json(result.report);
    return manifest.dump(2);
}

namespace {

struct SheetOutcome {
    bool ok = false;
    ScoreReport report;
    std::string error;
};

// One sheet under one bench generator; seeds derive from the sheet index
// so parallel scheduling cannot change any outcome.
SheetOutcome bench_one(const Sheet& sheet, BenchGenerator gen, const BenchOptions& opts,
                       size_t index) {
    SheetOutcome out;
    try {
        PipelineOptions run = opts.pipeline;
        run.seed = opts.pipeline.seed + index;
        if (gen == BenchGenerator::random) {
            Sheet processed = is_processed(sheet) ? sheet : heuristic_preprocess(sheet);
            PlacementConfig cfg = run.placement;
            cfg.seed = run.seed;
            Sheet placed = random_place(processed, cfg);
            PopulateConfig pop = run.population;
            pop.candidates = run.populate_candidates;
            pop.metrics = run.metrics;
            pop.weights = run.weights;
            Sheet filled = populate(placed, pop);
            out.report = evaluate(filled, run.metrics, run.weights);
        } else {
            run.generator =
                gen == BenchGenerator::llm ? GeneratorKind::llm : GeneratorKind::heuristic;
            out.report = run_pipeline(sheet, run).report;
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

BenchRow mean_row(const std::string& generator, const std::string& label,
                  const std::vector<const ScoreReport*>& reports) {
    BenchRow row;
    row.generator = generator;
    row.label = label;
    row.sheets = static_cast<int>(reports.size());
    if (reports.empty()) return row;
    auto opt = [](const std::optional<double>& v) { return v ? *v : 0.0; };
    for (const ScoreReport* r : reports) {
        row.fullness += r->fullness;
        row.compat_h += opt(r->compat_h);
        row.compat_v += opt(r->compat_v);
        row.align_h += r->align_h;
        row.align_v += r->align_v;
        row.t_align_h += r->t_align_h;
        row.t_align_v += r->t_align_v;
        row.r_align_h += r->r_align_h;
        row.r_align_v += r->r_align_v;
        row.balance_h += r->balance_h;
        row.balance_v += r->balance_v;
        row.overlap += r->overlap;
        row.total += r->weighted_total;
    }
    const double n = static_cast<double>(reports.size());
    row.fullness /= n;
    row.compat_h /= n;
    row.compat_v /= n;
    row.align_h /= n;
    row.align_v /= n;
    row.t_align_h /= n;
    row.t_align_v /= n;
    row.r_align_h /= n;
    row.r_align_v /= n;
    row.balance_h /= n;
    row.balance_v /= n;
    row.overlap /= n;
    row.total /= n;
    return row;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json row_json(const BenchRow& r) {
    return {{"generator", r.generator}, {"label", r.label},       {"sheets", r.sheets},
            {"fullness", r.fullness},   {"compat_h", r.compat_h}, {"compat_v", r.compat_v},
            {"align_h", r.align_h},     {"align_v", r.align_v},   {"t_align_h", r.t_align_h},
            {"t_align_v", r.t_align_v}, {"r_align_h", r.r_align_h}, {"r_align_v", r.r_align_v},
            {"balance_h", r.balance_h}, {"balance_v", r.balance_v}, {"overlap", r.overlap},
            {"total", r.total}};
}

}  // namespace

std::string BenchReport::csv() const {
    std::string out =
        "generator,label,sheets,fullness,compat_h,compat_v,align_h,align_v,t_align_h,"
        "t_align_v,r_align_h,r_align_v,balance_h,balance_v,overlap,total\n";
    for (const auto& r : rows) {
        out += r.generator + "," + r.label + "," + std::to_string(r.sheets) + "," +
               fmt(r.fullness) + "," + fmt(r.compat_h) + "," + fmt(r.compat_v) + "," +
               fmt(r.align_h) + "," + fmt(r.align_v) + "," + fmt(r.t_align_h) + "," +
               fmt(r.t_align_v) + "," + fmt(r.r_align_h) + "," + fmt(r.r_align_v) + "," +
               fmt(r.balance_h) + "," + fmt(r.balance_v) + "," + fmt(r.overlap) + "," +
               fmt(r.total) + "\n";
    }
    return out;
}

std::string BenchReport::to_json() const {
    json j;
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(row_json(r));
    j["failures"] = json::array();
    for (const auto& f : failures)
        j["failures"].push_back({{"sheet_index", f.sheet_index},
                                 {"generator", f.generator},
                                 {"error", f.error}});
    return j.dump(2);
}

BenchReport run_bench(const std::vector<Sheet>& corpus, const BenchOptions& opts) {
    if (corpus.empty()) throw ValidationError("benchmark corpus is empty");
    if (opts.generators.empty()) throw ValidationError("benchmark needs at least one generator");
    for (double p : opts.tails)
        if (!(p > 0.0 && p <= 1.0))
            throw ValidationError("tail fractions must lie in (0, 1]");

    int workers = opts.workers > 0
                      ? opts.workers
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    BenchReport report;
    for (BenchGenerator gen : opts.generators) {
        std::vector<SheetOutcome> outcomes(corpus.size());
        std::atomic<size_t> next{0};
        auto work = [&] {
            for (size_t i = next.fetch_add(1); i < corpus.size(); i = next.fetch_add(1))
                outcomes[i] = bench_one(corpus[i], gen, opts, i);
        };
        std::vector<std::thread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();

        std::vector<const ScoreReport*> good;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i].ok)
                good.push_back(&outcomes[i].report);
            else
                report.failures.push_back({i, to_string(gen), outcomes[i].error});
        }
        report.rows.push_back(mean_row(to_string(gen), "mean", good));

        for (double p : opts.tails) {
            std::vector<const ScoreReport*> sorted = good;
            std::stable_sort(sorted.begin(), sorted.end(),
                             [](const ScoreReport* a, const ScoreReport* b) {
                                 return a->weighted_total < b->weighted_total;
                             });
            size_t take = std::min(
                sorted.size(),
                static_cast<size_t>(std::ceil(p * static_cast<double>(sorted.size()))));
            sorted.resize(take);
            report.rows.push_back(
                mean_row(to_string(gen), "tail " + fmt(p * 100.0) + "%", sorted));
        }
    }
    return report;
}

}  // namespace gridsheet
