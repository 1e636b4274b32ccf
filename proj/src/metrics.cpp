#include "gridsheet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "gridsheet/ranker.hpp"
#include "json.hpp"

namespace gridsheet {

namespace {

constexpr double k_balance_floor = 1e-6;
constexpr long long k_max_bbox_cells = 25'000'000;

struct Frame {
    CellRect box;
    GridConfig grid;              // covers the box (unit grid when the layout has none)
    std::vector<uint8_t> mask;    // box.rows() x box.cols(), 1 where any component covers the cell
    std::vector<double> x;        // prefix sums of column widths across the box, x[0] = 0
    std::vector<double> y;        // prefix sums of row heights across the box

    int rows() const { return box.rows(); }
    int cols() const { return box.cols(); }
    bool covered(int r, int c) const { return mask[static_cast<size_t>(r) * cols() + c] != 0; }
};

Frame make_frame(const Sheet& layout) {
    Frame f;
    f.box = bounding_box(layout);
    if (f.box.cell_count() > k_max_bbox_cells)
        throw ValidationError("layout bounding box exceeds " + std::to_string(k_max_bbox_cells) + " cells");
    f.grid = layout.grid ? *layout.grid : unit_grid(f.box.bottom, f.box.right);
    f.mask.assign(static_cast<size_t>(f.box.cell_count()), 0);
    for (const auto& c : layout.components) {
        for (int r = c.rect->top; r <= c.rect->bottom; ++r) {
            const size_t base = static_cast<size_t>(r - f.box.top) * f.cols();
            for (int col = c.rect->left; col <= c.rect->right; ++col)
                f.mask[base + (col - f.box.left)] = 1;
        }
    }
    f.x.assign(f.cols() + 1, 0.0);
    for (int c = 0; c < f.cols(); ++c) f.x[c + 1] = f.x[c] + f.grid.col_widths[f.box.left - 1 + c];
    f.y.assign(f.rows() + 1, 0.0);
    for (int r = 0; r < f.rows(); ++r) f.y[r + 1] = f.y[r] + f.grid.row_heights[f.box.top - 1 + r];
    return f;
}

double capped_ratio(double covered, double total, double theta) {
    if (!(total > 0.0)) throw ValidationError("degenerate zero-area region");
    const double ratio = covered / total;
    return ratio >= theta ? 1.0 : ratio;
}

// Alignment along one direction. Anchors are the top_k coordinates shared
// by >= 2 components ordered by (frequency desc, coordinate asc); if no
// coordinate repeats, the single best-ranked coordinate is the anchor.
double direction_alignment(const std::vector<int>& coords, int top_k) {
    const size_t n = coords.size();
    if (n == 0) return 1.0;
    std::map<int, int> freq;
    for (int v : coords) ++freq[v];
    std::vector<std::pair<int, int>> ranked(freq.begin(), freq.end());  // (coord, count)
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::set<int> anchors;
    for (const auto& [coord, count] : ranked) {
        if (count < 2) continue;
        anchors.insert(coord);
        if (static_cast<int>(anchors.size()) == top_k) break;
    }
    if (anchors.empty()) anchors.insert(ranked.front().first);
    size_t violations = 0;
    for (int v : coords)
        if (!anchors.count(v)) ++violations;
    return 1.0 / (1.0 + static_cast<double>(violations) / static_cast<double>(n));
}

std::pair<double, double> alignment_of(const std::vector<const Component*>& comps, const MetricConstants& c) {
    std::vector<int> tops, lefts;
    tops.reserve(comps.size());
    lefts.reserve(comps.size());
    for (const Component* p : comps) {
        tops.push_back(p->rect->top);
        lefts.push_back(p->rect->left);
    }
    return {direction_alignment(tops, c.top_k), direction_alignment(lefts, c.top_k)};
}

void require_rects(const Sheet& layout) {
    if (layout.components.empty()) throw ValidationError("metric on an empty layout");
    for (const auto& c : layout.components)
        if (!c.rect) throw ValidationError("component \"" + c.id + "\" has no location");
}

// One half-split balance score. `along_x` selects the vertical midline
// (left/right halves); otherwise the horizontal midline (upper/lower).
double half_balance(const Frame& f, bool along_x, double theta) {
    const double total_w = f.x.back();
    const double total_h = f.y.back();
    const double mid = (along_x ? total_w : total_h) / 2.0;

    double cov_a = 0.0, cov_b = 0.0;
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) {
            if (!f.covered(r, c)) continue;
            const double w = f.x[c + 1] - f.x[c];
            const double h = f.y[r + 1] - f.y[r];
            const double lo = along_x ? f.x[c] : f.y[r];
            const double hi = along_x ? f.x[c + 1] : f.y[r + 1];
            const double in_a = std::clamp(mid - lo, 0.0, hi - lo);
            const double slice = along_x ? h : w;
            cov_a += in_a * slice;
            cov_b += (hi - lo - in_a) * slice;
        }
    }
    const double area_a = mid * (along_x ? total_h : total_w);
    const double area_b = area_a;  // midline splits the box exactly in half
    const double fa = capped_ratio(cov_a, area_a, theta);
    const double fb = capped_ratio(cov_b, area_b, theta);
    if (fa + fb == 0.0) return 1.0;  // unreachable for a tight bounding box; defensive
    const double score = 1.0 - std::abs(fa - fb) / (fa + fb);
    return std::max(score, k_balance_floor);
}

}  // namespace

double fullness(const Sheet& layout, const MetricConstants& c) {
    require_rects(layout);
    const Frame f = make_frame(layout);
    double covered = 0.0;
    for (int r = 0; r < f.rows(); ++r)
        for (int col = 0; col < f.cols(); ++col)
            if (f.covered(r, col)) covered += (f.x[col + 1] - f.x[col]) * (f.y[r + 1] - f.y[r]);
    const double bg = weighted_area(f.box, f.grid);
    return capped_ratio(covered, bg, c.theta_full);
}

std::pair<double, double> compatibility(const Sheet& layout, const MetricConstants& c) {
    require_rects(layout);
    if (!layout.grid) throw ValidationError("compatibility requires a grid config");
    const GridConfig& g = *layout.grid;

    double sum_rh = 0.0, sum_rv = 0.0, dev_rh = 0.0, dev_rv = 0.0;
    size_t m = 0;
    for (const auto& comp : layout.components) {
        for (const DataCellRegion& cell : data_cell_regions(comp)) {
            if (cell.text->empty()) continue;
            int longest = 0, lines = 1;
            int run = 0;
            for (char ch : *cell.text) {
                if (ch == '\n') {
                    ++lines;
                    longest = std::max(longest, run);
                    run = 0;
                } else {
                    ++run;
                }
            }
            longest = std::max(longest, run);
            double w = 0.0, h = 0.0;
            for (int col = cell.cells.left; col <= cell.cells.right; ++col) {
                if (col > static_cast<int>(g.col_widths.size()))
                    throw ValidationError("grid does not cover component \"" + comp.id + "\"");
                w += g.col_widths[col - 1];
            }
            for (int r = cell.cells.top; r <= cell.cells.bottom; ++r) {
                if (r > static_cast<int>(g.row_heights.size()))
                    throw ValidationError("grid does not cover component \"" + comp.id + "\"");
                h += g.row_heights[r - 1];
            }
            const double rh = c.col_unit_px * w / (c.text_char_px * longest + c.pad_h_px);
            const double rv = h / (c.text_line_px * lines + c.pad_v_px);
            sum_rh += rh;
            sum_rv += rv;
            dev_rh += std::abs(rh - 1.0);
            dev_rv += std::abs(rv - 1.0);
            ++m;
        }
    }
    if (m == 0) return {1.0, 1.0};
    const double dm = static_cast<double>(m);
    if (c.compat_aggregation == CompatAggregation::literal_sum)
        return {1.0 / (1.0 + std::abs(sum_rh - 1.0) / dm), 1.0 / (1.0 + std::abs(sum_rv - 1.0) / dm)};
    return {1.0 / (1.0 + dev_rh / dm), 1.0 / (1.0 + dev_rv / dm)};
}

std::pair<double, double> component_alignment(const Sheet& layout, const MetricConstants& c) {
    require_rects(layout);
    std::vector<const Component*> comps;
    comps.reserve(layout.components.size());
    for (const auto& comp : layout.components) comps.push_back(&comp);
    return alignment_of(comps, c);
}

std::pair<double, double> type_alignment(const Sheet& layout, const MetricConstants& c) {
    require_rects(layout);
    std::map<ComponentType, std::vector<const Component*>> groups;
    for (const auto& comp : layout.components) {
        if (!comp.type) throw ValidationError("component \"" + comp.id + "\" has no type");
        groups[*comp.type].push_back(&comp);
    }
    double sum_h = 0.0, sum_v = 0.0;
    size_t n = 0;
    for (const auto& [type, members] : groups) {
        if (members.size() < 2) continue;
        const auto [h, v] = alignment_of(members, c);
        sum_h += h;
        sum_v += v;
        ++n;
    }
    if (n == 0) return {1.0, 1.0};
    return {sum_h / n, sum_v / n};
}

std::pair<double, double> relation_alignment(const Sheet& layout, const std::vector<Relation>& relations,
                                             const MetricConstants& c) {
    require_rects(layout);
    if (relations.empty()) return {1.0, 1.0};

    std::map<std::string, size_t> index;
    for (size_t i = 0; i < layout.components.size(); ++i) index[layout.components[i].id] = i;

    std::vector<size_t> parent(layout.components.size());
    std::iota(parent.begin(), parent.end(), size_t{0});
    auto find = [&](size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const Relation& r : relations) {
        for (const std::string& id : r)
            if (!index.count(id)) throw ValidationError("relation references unknown component \"" + id + "\"");
        parent[find(index.at(r[0]))] = find(index.at(r[1]));
    }
    std::map<size_t, std::vector<const Component*>> groups;
    for (size_t i = 0; i < layout.components.size(); ++i) groups[find(i)].push_back(&layout.components[i]);

    double sum_h = 0.0, sum_v = 0.0;
    size_t n = 0;
    for (const auto& [root, members] : groups) {
        if (members.size() < 2) continue;
        const auto [h, v] = alignment_of(members, c);
        sum_h += h;
        sum_v += v;
        ++n;
    }
    if (n == 0) return {1.0, 1.0};
    return {sum_h / n, sum_v / n};
}

std::pair<double, double> balance(const Sheet& layout, const MetricConstants& c) {
    require_rects(layout);
    const Frame f = make_frame(layout);
    const double h = f.cols() == 1 ? 1.0 : half_balance(f, true, c.theta_full);
    const double v = f.rows() == 1 ? 1.0 : half_balance(f, false, c.theta_full);
    return {h, v};
}

double overlap_score(const Sheet& layout) {
    require_rects(layout);
    const size_t n = layout.components.size();
    long long pairs = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (rect_intersect(*layout.components[i].rect, *layout.components[j].rect)) ++pairs;
    if (pairs == 0) return 0.0;  // avoid the IEEE -0.0 in serialized scores
    const double collisions = 2.0 * static_cast<double>(pairs);
    return -(collisions * collisions) / static_cast<double>(n);
}

ScoreReport evaluate(const Sheet& layout, const MetricConstants& c) { return evaluate(layout, c, WeightProfile{}); }

ScoreReport evaluate(const Sheet& layout, const MetricConstants& c, const WeightProfile& w) {
    ScoreReport r;
    r.fullness = fullness(layout, c);
    if (layout.grid) {
        const auto [ch, cv] = compatibility(layout, c);
        r.compat_h = ch;
        r.compat_v = cv;
    }
    std::tie(r.align_h, r.align_v) = component_alignment(layout, c);
    std::tie(r.t_align_h, r.t_align_v) = type_alignment(layout, c);
    std::tie(r.r_align_h, r.r_align_v) = relation_alignment(layout, layout.relations, c);
    std::tie(r.balance_h, r.balance_v) = balance(layout, c);
    r.overlap = overlap_score(layout);
    r.weighted_total = weighted_total(r, w);
    return r;
}

std::string serialize_report(const ScoreReport& r) {
    nlohmann::json j;
    j["Fullness"] = r.fullness;
    if (r.compat_h && r.compat_v)
        j["Compatibility"] = {{"h", *r.compat_h}, {"v", *r.compat_v}};
    else
        j["Compatibility"] = nullptr;
    j["C-Alignment"] = {{"h", r.align_h}, {"v", r.align_v}};
    j["T-Alignment"] = {{"h", r.t_align_h}, {"v", r.t_align_v}};
    j["R-Alignment"] = {{"h", r.r_align_h}, {"v", r.r_align_v}};
    j["Balance"] = {{"h", r.balance_h}, {"v", r.balance_v}};
    j["Overlap"] = r.overlap;
    j["WeightedTotal"] = r.weighted_total;
    return j.dump(2) + "\n";
}

}  // namespace gridsheet
