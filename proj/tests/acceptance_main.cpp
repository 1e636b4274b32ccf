// Acceptance gate. Each criterion prints one [PASS]/[FAIL] line and pins
// its own tolerances and wall-clock budget; the binary exits non-zero when
// any line fails. Criteria are self-contained on purpose: they rebuild
// their corpora and fixtures instead of sharing state, so a failure always
// names exactly one broken contract.

#include <sys/types.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridsheet/llm.hpp"
#include "gridsheet/metrics.hpp"
#include "gridsheet/pixel_snap.hpp"
#include "gridsheet/placer.hpp"
#include "gridsheet/populator.hpp"
#include "gridsheet/ranker.hpp"
#include "gridsheet/reflection.hpp"
#include "gridsheet/sheet.hpp"
#include "gridsheet/sketch.hpp"
#include "gridsheet/synth.hpp"
#include "helpers.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace gridsheet;
using testutil::comp;
using testutil::layout_of;

namespace {

namespace fs = std::filesystem;

struct Checker {
    long checks = 0;
    long failures = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (notes.size() < 3) notes.push_back(what);
    }
};

struct Criterion {
    std::string name;
    double budget_s;  // <= 0 means untimed
    std::function<void(Checker&)> run;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

// Four equal tables tiling their bounding box, chained by relations; the
// solved grid makes every sub-score exactly 1 with zero overlap.
Sheet perfect_layout() {
    Sheet s;
    const char* ranges[] = {"A1:B2", "C1:D2", "A3:B4", "C3:D4"};
    for (int i = 0; i < 4; ++i) {
        Component c = comp("m" + std::to_string(i + 1), ComponentType::main_table, ranges[i]);
        c.data = {{"abcde", "abcde"}, {"abcde", "abcde"}};
        s.components.push_back(std::move(c));
    }
    s.relations = {{"m1", "m2"}, {"m2", "m3"}, {"m3", "m4"}};
    return s;
}

Sheet banner_table() {
    return layout_of({comp("T1", ComponentType::title, "A1:C1"),
                      comp("M1", ComponentType::main_table, "A2:B3")});
}

ScoreReport clean_report() {
    ScoreReport r;
    r.fullness = 1.0;
    r.align_h = r.align_v = 1.0;
    r.t_align_h = r.t_align_v = 1.0;
    r.r_align_h = r.r_align_v = 1.0;
    r.balance_h = r.balance_v = 1.0;
    r.overlap = 0.0;
    return r;
}

// Shared corpus recipe for the statistical criteria. Regenerated per
// criterion so each one stands alone.
std::vector<Sheet> acceptance_corpus() { return synth_corpus(2026, 50); }

bool has_long_text(const Sheet& s) {
    for (const auto& c : s.components)
        for (const auto& row : c.data)
            for (const auto& cell : row)
                if (cell.size() >= 40) return true;
    return false;
}

uint32_t read_be32(const std::vector<uint8_t>& b, size_t at) {
    return (static_cast<uint32_t>(b[at]) << 24) | (static_cast<uint32_t>(b[at + 1]) << 16) |
           (static_cast<uint32_t>(b[at + 2]) << 8) | b[at + 3];
}

struct ScopedDir {
    fs::path path;
    explicit ScopedDir(fs::path p) : path(std::move(p)) { fs::create_directories(path); }
    ~ScopedDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

// ------------------------------------------------------------------ criteria

void check_metric_exactness(Checker& ck) {
    const MetricConstants mc;

    const Sheet one_pair = layout_of({comp("a", ComponentType::main_table, "A1:B2"),
                                      comp("b", ComponentType::main_table, "B2:C3"),
                                      comp("c", ComponentType::meta_data, "E5:E5"),
                                      comp("d", ComponentType::meta_data, "G7:G7")});
    ck.expect(near(overlap_score(one_pair), -1.0), "one colliding pair among four must score -1");

    const Sheet three_pairs = layout_of({comp("a", ComponentType::main_table, "A1:C3"),
                                         comp("b", ComponentType::main_table, "B2:D4"),
                                         comp("c", ComponentType::main_table, "C3:E5")});
    ck.expect(near(overlap_score(three_pairs), -12.0),
              "three mutually colliding components must score -12");

    Sheet doubled = layout_of({comp("a", ComponentType::meta_data, "A1:A1")});
    doubled.components[0].data = {{"abcdefghij"}};
    doubled.grid = GridConfig{{320.0 / 7.0}, {25.0}};  // twice the solved width
    const auto [compat_h, compat_v] = compatibility(doubled, mc);
    ck.expect(near(compat_h, 0.5), "a cell twice as wide as its text must score 0.5, got " + fmt(compat_h));
    ck.expect(near(compat_v, 1.0), "the solved height must score 1");

    const Sheet off_anchor = layout_of({comp("a", ComponentType::meta_data, "A1:B1"),
                                        comp("b", ComponentType::meta_data, "A3:B3"),
                                        comp("c", ComponentType::meta_data, "A5:B5"),
                                        comp("d", ComponentType::meta_data, "D7:E7")});
    const double align_v = component_alignment(off_anchor, mc).second;
    ck.expect(near(align_v, 0.8), "one violator among four must score 0.8, got " + fmt(align_v));
}

void check_oracle_equivalence(Checker& ck) {
    const MetricConstants mc;
    std::mt19937 rng(9001);
    for (int i = 0; i < 1000; ++i) {
        const Sheet s = testutil::random_layout(rng, 12, 6);
        ck.expect(fullness(s, mc) == oracle::fullness_unit(s),
                  "fullness diverged from the cell-marking oracle at layout " + std::to_string(i));
        ck.expect(overlap_score(s) == oracle::overlap_unit(s),
                  "overlap diverged from the cell-marking oracle at layout " + std::to_string(i));
    }
}

void check_range_contract(Checker& ck) {
    const MetricConstants mc;
    std::mt19937 rng(7331);
    for (int i = 0; i < 10000; ++i) {
        Sheet s = testutil::random_layout(rng, 12, 6);
        const CellRect box = bounding_box(s);
        s.grid = unit_grid(box.bottom, box.right);
        const ScoreReport r = evaluate(s, mc);

        const std::string at = " at layout " + std::to_string(i);
        auto in_unit = [&](double v, const char* name) {
            ck.expect(v > 0.0 && v <= 1.0, std::string(name) + " out of (0,1]" + at);
        };
        in_unit(r.fullness, "fullness");
        ck.expect(r.compat_h.has_value() && r.compat_v.has_value(), "compatibility missing" + at);
        if (r.compat_h) in_unit(*r.compat_h, "horizontal compatibility");
        if (r.compat_v) in_unit(*r.compat_v, "vertical compatibility");
        in_unit(r.align_h, "alignment h");
        in_unit(r.align_v, "alignment v");
        in_unit(r.t_align_h, "type alignment h");
        in_unit(r.t_align_v, "type alignment v");
        in_unit(r.r_align_h, "relation alignment h");
        in_unit(r.r_align_v, "relation alignment v");
        in_unit(r.balance_h, "balance h");
        in_unit(r.balance_v, "balance v");
        ck.expect(r.overlap <= 0.0, "overlap above zero" + at);

        bool any = false;
        for (size_t a = 0; a < s.components.size(); ++a)
            for (size_t b = a + 1; b < s.components.size(); ++b)
                if (rect_intersect(*s.components[a].rect, *s.components[b].rect)) any = true;
        ck.expect((r.overlap == 0.0) == !any, "overlap zero must mean geometrically disjoint" + at);
    }
}

void check_perfect_total(Checker& ck) {
    Sheet s = perfect_layout();
    const double w = 100.0 / 7.0;  // solves 7w = 12*5 + 40
    s.grid = GridConfig{{w, w, w, w}, {25.0, 25.0, 25.0, 25.0}};
    const double total = evaluate(s, MetricConstants{}).weighted_total;
    ck.expect(near(total, 6.0), "perfect layout must total 6, got " + fmt(total));
}

void check_trigger_parity(Checker& ck) {
    const auto& aspects = all_reflection_aspects();
    ck.expect(aspects.size() == 10, "catalog must hold ten aspects");

    const auto golden = read_lines(std::string(GRIDSHEET_GOLDEN_DIR) + "/instructions.txt");
    ck.expect(golden.size() == 10, "frozen catalog must hold ten lines");
    std::set<std::string> distinct;
    for (size_t i = 0; i < aspects.size() && i < golden.size(); ++i) {
        ck.expect(instruction_for(aspects[i]) == golden[i],
                  "instruction " + std::to_string(i) + " drifted from the frozen wording");
        distinct.insert(golden[i]);
    }
    ck.expect(distinct.size() == 10, "instructions must be pairwise distinct");

    const ThresholdProfile th;
    ScoreReport r = clean_report();
    r.fullness = 0.49;
    const auto low = compute_triggers(r, th);
    ck.expect(low.size() == 1 && low[0].aspect == ReflectionAspect::fullness,
              "fullness 0.49 must trigger exactly the fullness aspect");
    ck.expect(!low.empty() && instruction_for(low[0].aspect) == golden[0],
              "the fullness trigger must carry the frozen instruction");

    r.fullness = 0.51;
    ck.expect(compute_triggers(r, th).empty(), "fullness 0.51 must not trigger");
    r.fullness = 0.5;
    ck.expect(compute_triggers(r, th).empty(), "equality with the threshold must not trigger");

    r = clean_report();
    r.overlap = -0.01;
    const auto hit = compute_triggers(r, th);
    ck.expect(hit.size() == 1 && hit[0].aspect == ReflectionAspect::overlap,
              "any negative overlap must trigger");
}

void check_threshold_sweep(Checker& ck) {
    const auto corpus = acceptance_corpus();
    const auto provider = make_scripted_provider(33);
    const double levels[] = {0.3, 0.5, 0.7};
    double invocations[3] = {0, 0, 0};
    double totals[3] = {0, 0, 0};

    for (size_t i = 0; i < corpus.size(); ++i) {
        PlacementConfig pc;
        pc.seed = 1000 + i;
        const Sheet start = random_place(corpus[i], pc);
        for (int li = 0; li < 3; ++li) {
            ReflectionOptions opts;
            opts.thresholds = ThresholdProfile::uniform(levels[li]);
            opts.max_rounds = 2;
            auto generate = [&](const Sheet& s, const ReflectionPlan& plan) {
                return llm_revise(s, plan, *provider);
            };
            const ReflectionResult res = reflect_loop(start, generate, opts);
            invocations[li] += res.rounds_run;
            totals[li] += res.report.weighted_total;
        }
    }

    const double n = static_cast<double>(corpus.size());
    for (int li = 0; li < 3; ++li) {
        invocations[li] /= n;
        totals[li] /= n;
    }
    ck.expect(invocations[2] > invocations[1],
              "mean invocations at 0.7 (" + fmt(invocations[2]) + ") must exceed 0.5 (" +
                  fmt(invocations[1]) + ")");
    ck.expect(invocations[1] > invocations[0],
              "mean invocations at 0.5 (" + fmt(invocations[1]) + ") must exceed 0.3 (" +
                  fmt(invocations[0]) + ")");
    ck.expect(totals[1] > totals[0], "mean total at 0.5 (" + fmt(totals[1]) +
                                         ") must exceed 0.3 (" + fmt(totals[0]) + ")");
}

void check_placement_validity(Checker& ck) {
    const auto corpus = acceptance_corpus();
    const MetricConstants mc;
    const WeightProfile weights;
    double heuristic_sum = 0.0, random_sum = 0.0;

    for (size_t i = 0; i < corpus.size(); ++i) {
        PlacementConfig pc;
        pc.seed = i;
        const Sheet placed = heuristic_place(corpus[i], pc);
        const std::string at = " on sheet " + std::to_string(i);

        bool valid = true;
        try {
            validate_layout(placed);
        } catch (const Error&) {
            valid = false;
        }
        ck.expect(valid, "heuristic placement broke a resize rule" + at);
        ck.expect(overlap_score(placed) == 0.0, "heuristic placement overlapped" + at);
        heuristic_sum += evaluate(placed, mc, weights).weighted_total;

        PlacementConfig rc;
        rc.seed = 5000 + i;
        random_sum += evaluate(random_place(corpus[i], rc), mc, weights).weighted_total;
    }

    const double n = static_cast<double>(corpus.size());
    const double gap = heuristic_sum / n - random_sum / n;
    ck.expect(gap >= 0.5, "heuristic mean must beat random by >= 0.5, gap " + fmt(gap));
}

void check_fit_vs_autofit(Checker& ck) {
    const auto corpus = acceptance_corpus();
    const MetricConstants mc;
    double fit_sum = 0.0, base_sum = 0.0;
    int sheets = 0, wins = 0;

    for (size_t i = 0; i < corpus.size(); ++i) {
        if (!has_long_text(corpus[i])) continue;
        PlacementConfig pc;
        pc.seed = i;
        Sheet placed = heuristic_place(corpus[i], pc);

        Sheet fitted = placed;
        fitted.grid = fit_dimensions(placed, mc);
        const auto [fh, fv] = compatibility(fitted, mc);
        const double fit = (fh + fv) / 2.0;

        Sheet baseline = placed;
        baseline.grid = autofit_baseline(baseline, mc);
        const auto [bh, bv] = compatibility(baseline, mc);
        const double base = (bh + bv) / 2.0;

        fit_sum += fit;
        base_sum += base;
        ++sheets;
        if (fit > base) ++wins;
    }

    ck.expect(sheets >= 5, "long-text subset too small: " + std::to_string(sheets));
    if (sheets == 0) return;
    ck.expect(fit_sum / sheets >= base_sum / sheets,
              "fitted mean compatibility " + fmt(fit_sum / sheets) +
                  " fell below the no-wrap baseline " + fmt(base_sum / sheets));
    ck.expect(wins >= static_cast<int>(std::ceil(0.8 * sheets)),
              "strict improvement on " + std::to_string(wins) + "/" + std::to_string(sheets) +
                  " sheets, need 80%");
}

void check_snapping(Checker& ck) {
    const GridSpec spec;
    ck.expect(spec.cols() == 20 && spec.rows() == 20, "default canvas must be a 20x20 grid");

    std::mt19937_64 rng(31337);
    auto unit = [&rng]() { return static_cast<double>(rng() % 1000000) / 1000000.0; };
    for (int it = 0; it < 1000; ++it) {
        std::vector<PixelRect> rects;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) {
            const double x0 = unit() * 1.3 * spec.bound_x;
            const double y0 = unit() * 1.3 * spec.bound_y;
            const double w = unit() * 0.4 * spec.bound_x;
            const double h = unit() * 0.4 * spec.bound_y;
            rects.push_back(PixelRect{x0, y0, std::min(x0 + w, 1.3 * spec.bound_x),
                                      std::min(y0 + h, 1.3 * spec.bound_y)});
        }
        const SnapResult result = snap_layout(rects, spec);
        const std::string at = " at layout " + std::to_string(it);
        ck.expect(result.scale <= 1.0, "scale must never grow" + at);
        ck.expect(result.rects.size() == rects.size(), "rect count changed" + at);
        if (result.rects.size() != rects.size()) continue;

        for (size_t i = 0; i < rects.size(); ++i) {
            const CellRect cell = result.rects[i];
            ck.expect(cell.top >= 1 && cell.left >= 1 && cell.bottom <= spec.rows() &&
                          cell.right <= spec.cols() && cell.rows() >= 1 && cell.cols() >= 1,
                      "snapped rect escaped the canvas" + at);

            const double x0 = rects[i].x0 * result.scale, x1 = rects[i].x1 * result.scale;
            const double y0 = rects[i].y0 * result.scale, y1 = rects[i].y1 * result.scale;
            const double half_x = spec.cell_x / 2 + 1e-9, half_y = spec.cell_y / 2 + 1e-9;
            if (cell.cols() > 1 || (x1 - x0) >= spec.cell_x) {
                ck.expect(std::abs((cell.left - 1) * spec.cell_x - x0) <= half_x &&
                              std::abs(cell.right * spec.cell_x - x1) <= half_x,
                          "x edge displaced beyond half a cell" + at);
            }
            if (cell.rows() > 1 || (y1 - y0) >= spec.cell_y) {
                ck.expect(std::abs((cell.top - 1) * spec.cell_y - y0) <= half_y &&
                              std::abs(cell.bottom * spec.cell_y - y1) <= half_y,
                          "y edge displaced beyond half a cell" + at);
            }

            const PixelRect back{(cell.left - 1) * spec.cell_x, (cell.top - 1) * spec.cell_y,
                                 cell.right * spec.cell_x, cell.bottom * spec.cell_y};
            ck.expect(snap_rect(back, spec) == cell, "snap is not idempotent" + at);
        }
    }
}

void check_sketch_determinism(Checker& ck) {
    const std::string svg = to_svg(render_sketch(banner_table()));
    ck.expect(svg == read_file(std::string(GRIDSHEET_GOLDEN_DIR) + "/sketch_banner_table.svg"),
              "svg bytes drifted from the golden file");
    ck.expect(svg == to_svg(render_sketch(banner_table())), "svg rendering must be stable");

    SketchDoc doc;
    doc.rows = 10;
    doc.cols = 20;
    const auto [w, h] = raster_dimensions(doc, 25);
    ck.expect(w == 500 && h == 250, "raster dimensions must be cells times cell_px");

    const auto png = rasterize(render_sketch(banner_table()), 16);
    ck.expect(png == rasterize(render_sketch(banner_table()), 16), "png bytes must be stable");
    ck.expect(png.size() > 24, "png too short");
    if (png.size() > 24) {
        ck.expect(read_be32(png, 16) == 3 * 16 && read_be32(png, 20) == 3 * 16,
                  "png header dimensions must follow the cell_px arithmetic");
    }
}

void check_offline_pipeline(Checker& ck) {
    const std::string cli = GRIDSHEET_CLI;
    const ScopedDir dir(fs::temp_directory_path() /
                        ("gridsheet_accept_" + std::to_string(::getpid())));
    fs::create_directories(dir.path / "corpus");
    fs::create_directories(dir.path / "run_a");
    fs::create_directories(dir.path / "run_b");

    const auto corpus = acceptance_corpus();
    for (size_t i = 0; i < corpus.size(); ++i)
        save_sheet_file(corpus[i], (dir.path / "corpus" / ("sheet_" + std::to_string(i) + ".json")).string());

    for (size_t i = 0; i < corpus.size(); ++i) {
        const std::string in = (dir.path / "corpus" / ("sheet_" + std::to_string(i) + ".json")).string();
        const std::string out_a = (dir.path / "run_a" / ("out_" + std::to_string(i) + ".json")).string();
        const std::string out_b = (dir.path / "run_b" / ("out_" + std::to_string(i) + ".json")).string();
        const std::string at = " on sheet " + std::to_string(i);

        auto run = [&](const std::string& out) {
            const std::string cmd = cli + " pipeline " + in +
                                    " --generator heuristic --provider mock --seed 7 -o " + out +
                                    " >/dev/null 2>&1";
            return std::system(cmd.c_str());
        };
        ck.expect(run(out_a) == 0, "first run failed" + at);
        ck.expect(run(out_b) == 0, "second run failed" + at);
        ck.expect(read_file(out_a) == read_file(out_b), "reruns are not byte-identical" + at);

        const auto manifest = nlohmann::json::parse(
            read_file((dir.path / "run_a" / ("out_" + std::to_string(i) + ".manifest.json")).string()));
        ck.expect(manifest.at("http_requests").get<int>() == 0, "network activity recorded" + at);
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"metric exactness on hand-derived fixtures", 1.0, check_metric_exactness},
        {"fullness and overlap match brute-force oracles on 1000 layouts", 30.0, check_oracle_equivalence},
        {"score ranges hold on 10000 random layouts", 60.0, check_range_contract},
        {"a constructed perfect layout totals 6.0", 0.0, check_perfect_total},
        {"reflection triggers fire strictly below threshold with frozen wording", 0.0, check_trigger_parity},
        {"reflection volume and quality rise with the threshold level", 120.0, check_threshold_sweep},
        {"heuristic placement is valid and beats random by 0.5", 300.0, check_placement_validity},
        {"fitted dimensions beat no-wrap autofit on long text", 0.0, check_fit_vs_autofit},
        {"pixel snapping stays in bounds, near its source and idempotent", 0.0, check_snapping},
        {"sketch rendering is byte-stable and dimension-exact", 0.0, check_sketch_determinism},
        {"offline pipeline runs are network-free and byte-identical", 0.0, check_offline_pipeline},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Checker ck;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(ck);
        } catch (const std::exception& e) {
            ck.expect(false, std::string("uncaught error: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && seconds > c.budget_s)
            ck.expect(false, "budget of " + fmt(c.budget_s) + "s exceeded");

        std::ostringstream line;
        line << (ck.failures == 0 ? "[PASS] " : "[FAIL] ") << c.name << " (" << std::fixed
             << std::setprecision(2) << seconds << "s)";
        if (ck.failures != 0) {
            line << ": " << ck.failures << " of " << ck.checks << " checks failed";
            for (const auto& note : ck.notes) line << "; " << note;
        }
        std::cout << line.str() << "\n";
        if (ck.failures != 0) ++failed;
    }

    std::cout << (failed == 0 ? "all criteria passed"
                              : std::to_string(failed) + " criteria failed")
              << "\n";
    return failed == 0 ? 0 : 1;
}
