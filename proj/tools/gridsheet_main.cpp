#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridsheet/errors.hpp"
#include "gridsheet/pipeline.hpp"
#include "gridsheet/pixel_snap.hpp"
#include "gridsheet/sketch.hpp"
#include "gridsheet/synth.hpp"
#include "json.hpp"

using namespace gridsheet;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Empty path means stdout.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw IoError("cannot write " + path);
    out << text;
    if (!out.good()) throw IoError("short write to " + path);
}

void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
    if (path.empty()) {
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) throw IoError("short write to " + path);
}

// foo.json -> foo.manifest.json; other extensions are suffixed.
std::string manifest_path_for(const std::string& out_path) {
    const std::string tail = ".json";
    if (out_path.size() > tail.size() &&
        out_path.compare(out_path.size() - tail.size(), tail.size(), tail) == 0)
        return out_path.substr(0, out_path.size() - tail.size()) + ".manifest.json";
    return out_path + ".manifest.json";
}

json score_json(const ScoreReport& r) {
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

// Sidecar for non-pipeline commands: enough to replay the invocation.
void write_command_manifest(const std::string& out_path, const std::string& command,
                            const json& options, const std::vector<std::string>& inputs) {
    if (out_path.empty()) return;
    json m = {{"command", command},
              {"options", options},
              {"inputs", inputs},
              {"http_requests", HttpChatProvider::attempted_requests()}};
    write_text(manifest_path_for(out_path), m.dump(2) + "\n");
}

// --provider none|mock|http plus config/transcript plumbing, shared by the
// generation commands.
struct ProviderOpts {
    std::string kind = "none";
    std::string config_path;
    std::string transcript_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--provider", kind, "Chat provider: none, mock or http")
            ->check(CLI::IsMember({"none", "mock", "http"}));
        cmd->add_option("--provider-config", config_path,
                        "Provider config JSON (required for --provider http)");
        cmd->add_option("--transcript", transcript_path,
                        "Append every provider exchange to this JSON-lines file");
    }
};

struct BuiltProvider {
    std::shared_ptr<ChatProvider> owned;
    std::unique_ptr<TranscriptingProvider> audited;
    ProviderConfig cfg;
    bool has_cfg = false;

    ChatProvider* get() {
        if (audited) return audited.get();
        return owned.get();
    }
};

BuiltProvider build_provider(const ProviderOpts& opts, uint64_t seed) {
    BuiltProvider built;
    if (opts.kind == "none") {
        if (!opts.transcript_path.empty())
            throw ValidationError("--transcript needs a provider");
        return built;
    }
    if (opts.kind == "mock") {
        built.owned = make_scripted_provider(seed);
    } else {
        if (opts.config_path.empty())
            throw ValidationError("--provider http requires --provider-config");
        built.cfg = parse_provider_config(read_text(opts.config_path));
        built.has_cfg = true;
        built.owned = std::make_shared<HttpChatProvider>(built.cfg);
    }
    if (!opts.transcript_path.empty())
        built.audited = std::make_unique<TranscriptingProvider>(*built.owned, opts.transcript_path);
    return built;
}

std::vector<std::string> collect_corpus_files(const std::vector<std::string>& args) {
    std::vector<std::string> files;
    for (const auto& arg : args) {
        std::error_code ec;
        if (fs::is_directory(arg, ec)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(arg)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json" &&
                    entry.path().string().find(".manifest.json") == std::string::npos)
                    found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(arg);
        }
    }
    if (files.empty()) throw ValidationError("no corpus sheets found");
    return files;
}

void setup_score(CLI::App& app) {
    auto* cmd = app.add_subcommand("score", "Score a placed layout on every aspect");
    auto input = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("input", *input, "Layout JSON")->required();
    cmd->add_option("-o,--out", *out, "Write the report here instead of stdout");
    cmd->callback([input, out] {
        Sheet layout = load_sheet_file(*input);
        ScoreReport report = evaluate(layout, MetricConstants{}, WeightProfile{});
        write_text(*out, score_json(report).dump(2) + "\n");
        write_command_manifest(*out, "score", json::object(), {*input});
    });
}

void setup_rank(CLI::App& app) {
    auto* cmd = app.add_subcommand("rank", "Rank candidate layouts by weighted total");
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("inputs", *inputs, "Candidate layout JSON files")->required()->expected(-1);
    cmd->add_option("-o,--out", *out, "Write the ranking here instead of stdout");
    cmd->callback([inputs, out] {
        std::vector<ScoreReport> reports;
        for (const auto& path : *inputs)
            reports.push_back(evaluate(load_sheet_file(path), MetricConstants{}, WeightProfile{}));
        size_t best = rank(reports, WeightProfile{});
        json j;
        j["best_index"] = best;
        j["best_input"] = (*inputs)[best];
        j["totals"] = json::array();
        for (const auto& r : reports) j["totals"].push_back(r.weighted_total);
        write_text(*out, j.dump(2) + "\n");
        write_command_manifest(*out, "rank", json::object(), *inputs);
    });
}

void setup_place(CLI::App& app) {
    auto* cmd = app.add_subcommand("place", "Generate and rank structure candidates");
    struct Opts {
        std::string input, out;
        uint64_t seed = 0;
        int candidates = 3;
        std::string generator = "heuristic";
        ProviderOpts provider;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "Processed sheet JSON")->required();
    cmd->add_option("-o,--out", o->out, "Write the skeleton here instead of stdout");
    cmd->add_option("--seed", o->seed, "Deterministic seed");
    cmd->add_option("--candidates", o->candidates, "Skeleton candidates to rank");
    cmd->add_option("--generator", o->generator, "heuristic or llm")
        ->check(CLI::IsMember({"heuristic", "llm"}));
    o->provider.attach(cmd);
    cmd->callback([o] {
        BuiltProvider provider = build_provider(o->provider, o->seed);
        PipelineOptions run;
        run.seed = o->seed;
        run.place_candidates = o->candidates;
        run.generator = generator_from_string(o->generator);
        run.provider = provider.get();
        run.reflect = false;

        Sheet processed = load_sheet_file(o->input);
        if (run.generator == GeneratorKind::llm && !run.provider)
            throw ProviderError("the llm generator needs --provider mock or http");
        std::vector<Sheet> candidates;
        if (run.generator == GeneratorKind::llm) {
            TokenLedger ledger;
            for (int i = 0; i < o->candidates; ++i)
                candidates.push_back(llm_place(processed, *run.provider, &ledger));
        } else {
            PlacementConfig cfg;
            cfg.seed = o->seed;
            cfg.candidates = o->candidates;
            candidates = generate_candidates(processed, cfg);
        }
        std::vector<ScoreReport> reports;
        for (const auto& c : candidates)
            reports.push_back(evaluate(c, MetricConstants{}, WeightProfile{}));
        write_text(o->out, serialize_sheet(candidates[rank(reports, WeightProfile{})]));
        write_command_manifest(o->out, "place",
                               {{"seed", o->seed},
                                {"candidates", o->candidates},
                                {"generator", o->generator},
                                {"provider", o->provider.kind}},
                               {o->input});
    });
}

void setup_reflect(CLI::App& app) {
    auto* cmd = app.add_subcommand("reflect", "Run threshold-gated revision rounds");
    struct Opts {
        std::string input, out;
        uint64_t seed = 0;
        double level = 0.5;
        int max_rounds = 1;
        bool force = false, no_rules = false, no_vision = false;
        std::string generator = "heuristic";
        ProviderOpts provider;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "Placed layout JSON")->required();
    cmd->add_option("-o,--out", o->out, "Write the revised layout here instead of stdout");
    cmd->add_option("--seed", o->seed, "Deterministic seed");
    cmd->add_option("--level", o->level, "Uniform trigger threshold (overlap stays at 0)");
    cmd->add_option("--max-rounds", o->max_rounds, "Revision round budget");
    cmd->add_flag("--force", o->force, "Revise even when nothing triggers");
    cmd->add_flag("--no-rules", o->no_rules, "Skip per-aspect instruction strings");
    cmd->add_flag("--no-vision", o->no_vision, "Skip the rendered sketch attachment");
    cmd->add_option("--generator", o->generator, "heuristic or llm")
        ->check(CLI::IsMember({"heuristic", "llm"}));
    o->provider.attach(cmd);
    cmd->callback([o] {
        BuiltProvider provider = build_provider(o->provider, o->seed);
        Sheet layout = load_sheet_file(o->input);

        ReflectionOptions ropts;
        ropts.thresholds = ThresholdProfile::uniform(o->level);
        ropts.max_rounds = o->max_rounds;
        ropts.force = o->force;
        ropts.rules = !o->no_rules;
        ropts.vision = !o->no_vision;

        TokenLedger ledger;
        RevisionGenerator revise;
        if (generator_from_string(o->generator) == GeneratorKind::llm) {
            ChatProvider* p = provider.get();
            if (!p) throw ProviderError("the llm generator needs --provider mock or http");
            revise = [p, &ledger](const Sheet& current, const ReflectionPlan& plan) {
                return llm_revise(current, plan, *p, &ledger);
            };
        } else {
            uint64_t seed = o->seed;
            auto round = std::make_shared<uint64_t>(0);
            revise = [seed, round](const Sheet& current, const ReflectionPlan&) {
                PlacementConfig cfg;
                cfg.seed = seed + 7919 * ++*round;
                return heuristic_place(current, cfg);
            };
        }
        ReflectionResult result = reflect_loop(layout, revise, ropts);
        write_text(o->out, serialize_sheet(result.layout));
        write_command_manifest(o->out, "reflect",
                               {{"seed", o->seed},
                                {"level", o->level},
                                {"max_rounds", o->max_rounds},
                                {"force", o->force},
                                {"rules", !o->no_rules},
                                {"vision", !o->no_vision},
                                {"generator", o->generator},
                                {"provider", o->provider.kind},
                                {"rounds_run", result.rounds_run}},
                               {o->input});
    });
}

void setup_populate(CLI::App& app) {
    auto* cmd = app.add_subcommand("populate", "Fill content wrapping and grid dimensions");
    struct Opts {
        std::string input, out;
        uint64_t seed = 0;
        int candidates = 3;
        std::string generator = "heuristic";
        ProviderOpts provider;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "Placed layout JSON")->required();
    cmd->add_option("-o,--out", o->out, "Write the populated layout here instead of stdout");
    cmd->add_option("--seed", o->seed, "Deterministic seed (used by the mock provider)");
    cmd->add_option("--candidates", o->candidates, "Population candidates to rank");
    cmd->add_option("--generator", o->generator, "heuristic or llm")
        ->check(CLI::IsMember({"heuristic", "llm"}));
    o->provider.attach(cmd);
    cmd->callback([o] {
        BuiltProvider provider = build_provider(o->provider, o->seed);
        Sheet layout = load_sheet_file(o->input);
        Sheet result;
        if (generator_from_string(o->generator) == GeneratorKind::llm) {
            ChatProvider* p = provider.get();
            if (!p) throw ProviderError("the llm generator needs --provider mock or http");
            TokenLedger ledger;
            std::vector<Sheet> candidates;
            for (int i = 0; i < o->candidates; ++i)
                candidates.push_back(llm_populate(layout, *p, &ledger));
            std::vector<ScoreReport> reports;
            for (const auto& c : candidates)
                reports.push_back(evaluate(c, MetricConstants{}, WeightProfile{}));
            result = candidates[rank(reports, WeightProfile{})];
        } else {
            PopulateConfig cfg;
            cfg.candidates = o->candidates;
            result = populate(layout, cfg);
        }
        write_text(o->out, serialize_sheet(result));
        write_command_manifest(o->out, "populate",
                               {{"seed", o->seed},
                                {"candidates", o->candidates},
                                {"generator", o->generator},
                                {"provider", o->provider.kind}},
                               {o->input});
    });
}

void setup_render(CLI::App& app) {
    auto* cmd = app.add_subcommand("render", "Render a layout sketch as SVG or PNG");
    struct Opts {
        std::string input, out;
        std::string format = "svg";
        int cell_px = 40;
        bool no_gridlines = false;
        double label_size = 0.45;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "Placed layout JSON")->required();
    cmd->add_option("-o,--out", o->out, "Write the image here instead of stdout");
    cmd->add_option("--format", o->format, "svg or png")
        ->check(CLI::IsMember({"svg", "png"}));
    cmd->add_option("--cell-px", o->cell_px, "PNG pixels per grid cell (>= 4)");
    cmd->add_flag("--no-gridlines", o->no_gridlines, "Drop the cell gridlines");
    cmd->add_option("--label-size", o->label_size, "Label font size in cell units");
    cmd->callback([o] {
        Sheet layout = load_sheet_file(o->input);
        StyleMap style;
        style.gridlines = !o->no_gridlines;
        style.label_size = o->label_size;
        SketchDoc doc = render_sketch(layout, style);
        if (o->format == "svg")
            write_text(o->out, to_svg(doc));
        else
            write_bytes(o->out, rasterize(doc, o->cell_px));
        write_command_manifest(o->out, "render",
                               {{"format", o->format},
                                {"cell_px", o->cell_px},
                                {"gridlines", !o->no_gridlines},
                                {"label_size", o->label_size}},
                               {o->input});
    });
}

void setup_snap(CLI::App& app) {
    auto* cmd = app.add_subcommand("snap", "Snap pixel-space rectangles onto the cell grid");
    struct Opts {
        std::string input, out;
        GridSpec spec;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "JSON: {\"components\":[{\"id\",\"pixels\":[x0,y0,x1,y1]}]}")
        ->required();
    cmd->add_option("-o,--out", o->out, "Write grid locations here instead of stdout");
    cmd->add_option("--bound-x", o->spec.bound_x, "Canvas width in pixels");
    cmd->add_option("--bound-y", o->spec.bound_y, "Canvas height in pixels");
    cmd->add_option("--cell-x", o->spec.cell_x, "Cell width in pixels");
    cmd->add_option("--cell-y", o->spec.cell_y, "Cell height in pixels");
    cmd->callback([o] {
        json doc;
        try {
            doc = json::parse(read_text(o->input));
        } catch (const json::exception& e) {
            throw ParseError(std::string("snap input: ") + e.what());
        }
        if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array())
            throw ValidationError("snap input must be an object with a \"components\" array");
        std::vector<std::string> ids;
        std::vector<PixelRect> rects;
        for (const auto& item : doc["components"]) {
            if (!item.is_object() || !item.contains("id") || !item.contains("pixels") ||
                !item["pixels"].is_array() || item["pixels"].size() != 4)
                throw ValidationError(
                    "each snap component needs an id and a [x0,y0,x1,y1] pixels array");
            ids.push_back(item["id"].get<std::string>());
            rects.push_back({item["pixels"][0].get<double>(), item["pixels"][1].get<double>(),
                             item["pixels"][2].get<double>(), item["pixels"][3].get<double>()});
        }
        SnapResult snapped = snap_layout(rects, o->spec);
        json out;
        out["scale"] = snapped.scale;
        out["components"] = json::array();
        for (size_t i = 0; i < ids.size(); ++i)
            out["components"].push_back(
                {{"id", ids[i]}, {"location", format_range(snapped.rects[i])}});
        write_text(o->out, out.dump(2) + "\n");
        write_command_manifest(o->out, "snap",
                               {{"bound_x", o->spec.bound_x},
                                {"bound_y", o->spec.bound_y},
                                {"cell_x", o->spec.cell_x},
                                {"cell_y", o->spec.cell_y}},
                               {o->input});
    });
}

void setup_pipeline(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "pipeline", "Pre-process, place, reflect and populate one sheet end to end");
    struct Opts {
        std::string input, out;
        uint64_t seed = 0;
        int candidates = 3;
        int populate_candidates = 3;
        bool no_reflect = false;
        double level = 0.5;
        int max_rounds = 1;
        bool no_rules = false, no_vision = false;
        std::string generator = "heuristic";
        std::string exemplar_dir;
        ProviderOpts provider;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("input", o->input, "Sheet JSON (raw or already typed)")->required();
    cmd->add_option("-o,--out", o->out, "Write the final layout here instead of stdout");
    cmd->add_option("--seed", o->seed, "Deterministic seed");
    cmd->add_option("--candidates", o->candidates, "Structure candidates to rank");
    cmd->add_option("--populate-candidates", o->populate_candidates,
                    "Population candidates to rank");
    cmd->add_flag("--no-reflect", o->no_reflect, "Skip the revision stage");
    cmd->add_option("--level", o->level, "Uniform trigger threshold (overlap stays at 0)");
    cmd->add_option("--max-rounds", o->max_rounds, "Revision round budget");
    cmd->add_flag("--no-rules", o->no_rules, "Skip per-aspect instruction strings");
    cmd->add_flag("--no-vision", o->no_vision, "Skip the rendered sketch attachment");
    cmd->add_option("--generator", o->generator, "heuristic or llm")
        ->check(CLI::IsMember({"heuristic", "llm"}));
    cmd->add_option("--exemplar-dir", o->exemplar_dir,
                    "Topic exemplar images (vision providers only)");
    o->provider.attach(cmd);
    cmd->callback([o] {
        BuiltProvider provider = build_provider(o->provider, o->seed);
        PipelineOptions run;
        run.seed = o->seed;
        run.place_candidates = o->candidates;
        run.populate_candidates = o->populate_candidates;
        run.reflect = !o->no_reflect;
        run.generator = generator_from_string(o->generator);
        run.provider = provider.get();
        run.exemplar_dir = o->exemplar_dir;
        run.reflection.thresholds = ThresholdProfile::uniform(o->level);
        run.reflection.max_rounds = o->max_rounds;
        run.reflection.rules = !o->no_rules;
        run.reflection.vision = !o->no_vision;

        PipelineResult result = run_pipeline(load_sheet_file(o->input), run);
        write_text(o->out, serialize_sheet(result.layout));
        if (!o->out.empty())
            write_text(manifest_path_for(o->out),
                       manifest_json(result, run, provider.has_cfg ? &provider.cfg : nullptr) +
                           "\n");
    });
}

void setup_bench(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench", "Score generators across a corpus");
    struct Opts {
        std::vector<std::string> inputs;
        std::string out;
        std::vector<std::string> generators = {"heuristic"};
        std::vector<double> tails;
        int workers = 0;
        uint64_t seed = 0;
        bool as_json = false;
        bool no_reflect = false;
        ProviderOpts provider;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("inputs", o->inputs, "Sheet JSON files or directories of them")
        ->required()
        ->expected(-1);
    cmd->add_option("-o,--out", o->out, "Write the table here instead of stdout");
    cmd->add_option("--generators", o->generators, "heuristic, random, llm")->delimiter(',');
    cmd->add_option("--tails", o->tails, "Extra rows over the lowest-scoring fractions")
        ->delimiter(',');
    cmd->add_option("--workers", o->workers, "Worker threads (0: one per hardware thread)");
    cmd->add_option("--seed", o->seed, "Base seed; sheet index is added per run");
    cmd->add_flag("--json", o->as_json, "Emit JSON instead of CSV");
    cmd->add_flag("--no-reflect", o->no_reflect, "Skip the revision stage");
    o->provider.attach(cmd);
    cmd->callback([o] {
        BuiltProvider provider = build_provider(o->provider, o->seed);
        BenchOptions opts;
        opts.generators.clear();
        for (const auto& g : o->generators)
            opts.generators.push_back(bench_generator_from_string(g));
        opts.tails = o->tails;
        opts.workers = o->workers;
        opts.pipeline.seed = o->seed;
        opts.pipeline.reflect = !o->no_reflect;
        opts.pipeline.provider = provider.get();

        std::vector<std::string> files = collect_corpus_files(o->inputs);
        std::vector<Sheet> corpus;
        corpus.reserve(files.size());
        for (const auto& f : files) corpus.push_back(load_sheet_file(f));

        BenchReport report = run_bench(corpus, opts);
        write_text(o->out, o->as_json ? report.to_json() + "\n" : report.csv());
        for (const auto& f : report.failures)
            std::cerr << "bench: sheet " << f.sheet_index << " (" << files[f.sheet_index]
                      << ") failed under " << f.generator << ": " << f.error << "\n";
        write_command_manifest(o->out, "bench",
                               {{"seed", o->seed},
                                {"generators", o->generators},
                                {"tails", o->tails},
                                {"workers", o->workers},
                                {"reflect", !o->no_reflect},
                                {"provider", o->provider.kind},
                                {"sheets", corpus.size()},
                                {"failures", report.failures.size()}},
                               files);
    });
}

void setup_synth(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
    struct Opts {
        std::string out_dir;
        std::string out;
        uint64_t seed = 0;
        int count = 10;
        SynthProfile profile;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--out-dir", o->out_dir, "Write sheet_NNN.json files into this directory");
    cmd->add_option("-o,--out", o->out, "Write a single sheet here (requires --count 1)");
    cmd->add_option("--seed", o->seed, "Deterministic seed");
    cmd->add_option("--count", o->count, "Number of sheets");
    cmd->add_option("--long-text-prob", o->profile.long_text_prob,
                    "Chance of paragraph-length cells per sheet");
    cmd->add_option("--chart-prob", o->profile.chart_prob, "Chance of a chart per main table");
    cmd->add_option("--max-table-rows", o->profile.max_table_rows, "Largest table row count");
    cmd->add_option("--max-table-cols", o->profile.max_table_cols, "Largest table column count");
    cmd->callback([o] {
        if (o->count < 1) throw ValidationError("--count must be at least 1");
        std::vector<Sheet> corpus = synth_corpus(o->seed, o->count, o->profile);
        if (!o->out_dir.empty()) {
            std::error_code ec;
            fs::create_directories(o->out_dir, ec);
            if (ec) throw IoError("cannot create " + o->out_dir);
            for (size_t i = 0; i < corpus.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "sheet_%03zu.json", i);
                save_sheet_file(corpus[i], (fs::path(o->out_dir) / name).string());
            }
            json m = {{"command", "synth"},
                      {"seed", o->seed},
                      {"count", o->count},
                      {"long_text_prob", o->profile.long_text_prob},
                      {"chart_prob", o->profile.chart_prob}};
            write_text((fs::path(o->out_dir) / "synth.manifest.json").string(), m.dump(2) + "\n");
            return;
        }
        if (o->count != 1 && o->out.empty())
            throw ValidationError("--count > 1 needs --out-dir");
        if (o->count != 1)
            throw ValidationError("-o writes a single sheet; use --out-dir for a corpus");
        write_text(o->out, serialize_sheet(corpus[0]));
        write_command_manifest(o->out, "synth",
                               {{"seed", o->seed}, {"count", o->count}}, {});
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-based spreadsheet layout engine"};
    app.require_subcommand(1);
    setup_score(app);
    setup_rank(app);
    setup_place(app);
    setup_reflect(app);
    setup_populate(app);
    setup_render(app);
    setup_snap(app);
    setup_pipeline(app);
    setup_bench(app);
    setup_synth(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // argument misuse is a validation failure
    } catch (const ParseError& e) {
        std::cerr << "gridsheet: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "gridsheet: " << e.what() << "\n";
        return 2;
    } catch (const ProviderError& e) {
        std::cerr << "gridsheet: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "gridsheet: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
