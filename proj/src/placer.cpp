#include "gridsheet/placer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "gridsheet/errors.hpp"

namespace gridsheet {

namespace {

double aspect(int rows, int cols) {
    return static_cast<double>(cols) / static_cast<double>(rows);
}

// Union-find over component indices for relation grouping.
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Block {
    // Indices into sheet.components, stacked vertically in this order.
    std::vector<int> members;
    int rows = 0;
    int cols = 0;
    int type_rank = 5;
    CellRef pos{1, 1};  // top-left of the block
};

int type_rank_of(const Component& c) {
    if (!c.type) return 4;
    switch (*c.type) {
        case ComponentType::main_table: return 0;
        case ComponentType::summary_data: return 1;
        case ComponentType::meta_data: return 2;
        case ComponentType::chart: return 3;
        case ComponentType::title: return 4;
    }
    return 4;
}

bool is_title(const Component& c) {
    return c.type && *c.type == ComponentType::title;
}

// Natural (rows, cols) of each non-banner component; charts fall back to
// declared size via Component::natural().
Size natural_of(const Component& c) { return c.natural(); }

// Assigns rects: members of a block stack top-down, left aligned.
void commit_block(Sheet& sheet, const Block& b) {
    int row = b.pos.row;
    for (int idx : b.members) {
        Component& c = sheet.components[static_cast<size_t>(idx)];
        Size nat = natural_of(c);
        c.rect = CellRect{row, b.pos.col, row + nat.rows - 1, b.pos.col + nat.cols - 1};
        row += nat.rows;
    }
}

int max_right(const Sheet& sheet, int skip_idx) {
    int right = 0;
    for (size_t i = 0; i < sheet.components.size(); ++i) {
        if (static_cast<int>(i) == skip_idx) continue;
        if (sheet.components[i].rect) right = std::max(right, sheet.components[i].rect->right);
    }
    return right;
}

// Re-spans the banner title (component index `banner`) across all active
// columns. No-op when banner < 0.
void respan_banner(Sheet& sheet, int banner, int banner_rows) {
    if (banner < 0) return;
    int right = max_right(sheet, banner);
    Size nat = natural_of(sheet.components[static_cast<size_t>(banner)]);
    if (right < nat.cols) right = nat.cols;
    sheet.components[static_cast<size_t>(banner)].rect = CellRect{1, 1, banner_rows, right};
}

bool rects_disjoint(const Sheet& sheet) {
    const auto& cs = sheet.components;
    for (size_t i = 0; i < cs.size(); ++i)
        for (size_t j = i + 1; j < cs.size(); ++j)
            if (rect_intersect(*cs[i].rect, *cs[j].rect)) return false;
    return true;
}

bool in_bounds(const Sheet& sheet, const PlacementConfig& cfg) {
    for (const auto& c : sheet.components) {
        if (c.rect->top < 1 || c.rect->left < 1) return false;
        if (c.rect->bottom > cfg.max_rows || c.rect->right > cfg.max_cols) return false;
    }
    return true;
}

double total_of(const Sheet& sheet, const PlacementConfig& cfg) {
    return evaluate(sheet, cfg.metrics, cfg.weights).weighted_total;
}

// Seeded hill climbing over block translations, block swaps and chart
// resizes. Moves that overlap, leave bounds or fail resize rules are
// rejected; only strict improvements are kept. The draw sequence does not
// depend on acceptance, so runs are reproducible.
void local_search(Sheet& sheet, const std::vector<int>& movable, int banner, int banner_rows,
                  const PlacementConfig& cfg) {
    if (movable.empty() || cfg.local_search_iters <= 0) return;
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0xb5297a4d3d2cull);
    auto draw = [&rng](uint64_t n) { return static_cast<int>(rng() % n); };

    std::vector<int> charts;
    if (cfg.resize.allow_chart_resize)
        for (int idx : movable) {
            const Component& c = sheet.components[static_cast<size_t>(idx)];
            if (c.type && *c.type == ComponentType::chart) charts.push_back(idx);
        }

    const int min_row = banner_rows + 1;
    double best = total_of(sheet, cfg);
    for (int iter = 0; iter < cfg.local_search_iters; ++iter) {
        Sheet trial = sheet;
        int kind = draw(charts.empty() ? 2u : 3u);
        if (kind == 0) {
            // Translate one block member set: move a single component.
            int idx = movable[static_cast<size_t>(draw(movable.size()))];
            int dir = draw(4);
            int step = 1 + draw(3);
            CellRect& r = *trial.components[static_cast<size_t>(idx)].rect;
            int dr = (dir == 0) ? -step : (dir == 1) ? step : 0;
            int dc = (dir == 2) ? -step : (dir == 3) ? step : 0;
            r = CellRect{r.top + dr, r.left + dc, r.bottom + dr, r.right + dc};
            if (r.top < min_row) continue;
        } else if (kind == 1) {
            // Swap the anchors of two components.
            int a = movable[static_cast<size_t>(draw(movable.size()))];
            int b = movable[static_cast<size_t>(draw(movable.size()))];
            if (a == b) continue;
            CellRect& ra = *trial.components[static_cast<size_t>(a)].rect;
            CellRect& rb = *trial.components[static_cast<size_t>(b)].rect;
            CellRef pa{ra.top, ra.left};
            CellRef pb{rb.top, rb.left};
            ra = CellRect{pb.row, pb.col, pb.row + ra.rows() - 1, pb.col + ra.cols() - 1};
            rb = CellRect{pa.row, pa.col, pa.row + rb.rows() - 1, pa.col + rb.cols() - 1};
        } else {
            // Nudge one chart edge within the aspect band.
            int idx = charts[static_cast<size_t>(draw(charts.size()))];
            CellRect& r = *trial.components[static_cast<size_t>(idx)].rect;
            int axis = draw(2);
            int delta = draw(2) == 0 ? 1 : -1;
            if (axis == 0)
                r.bottom += delta;
            else
                r.right += delta;
            if (r.bottom < r.top || r.right < r.left) continue;
            try {
                validate_resize(trial.components[static_cast<size_t>(idx)], r, cfg.resize);
            } catch (const ValidationError&) {
                continue;
            }
        }
        respan_banner(trial, banner, banner_rows);
        if (!in_bounds(trial, cfg)) continue;
        if (!rects_disjoint(trial)) continue;
        double score = total_of(trial, cfg);
        if (score > best) {
            best = score;
            sheet = std::move(trial);
        }
    }
}

}  // namespace

void validate_resize(const Component& c, const CellRect& proposed, const ResizePolicy& policy) {
    if (proposed.rows() < 1 || proposed.cols() < 1)
        throw ValidationError("component '" + c.id + "': proposed size must be positive");
    if (!c.type) {
        Size nat = c.natural();
        if (proposed.rows() != nat.rows || proposed.cols() != nat.cols)
            throw ValidationError("component '" + c.id + "': untyped components keep their natural size");
        return;
    }
    Size nat = c.natural();
    switch (*c.type) {
        case ComponentType::title:
            return;  // free
        case ComponentType::chart: {
            if (proposed.rows() == nat.rows && proposed.cols() == nat.cols) return;
            if (!policy.allow_chart_resize)
                throw ValidationError("component '" + c.id + "': chart resizing is disabled");
            double factor = aspect(proposed.rows(), proposed.cols()) / aspect(nat.rows, nat.cols);
            if (factor < policy.chart_aspect_min || factor > policy.chart_aspect_max)
                throw ValidationError("component '" + c.id + "': chart aspect drifts beyond the allowed band");
            return;
        }
        case ComponentType::main_table:
            if (proposed.cols() != nat.cols)
                throw ValidationError("component '" + c.id + "': tables keep their column count");
            if (proposed.rows() < nat.rows)
                throw ValidationError("component '" + c.id + "': tables may not shrink below their data");
            return;
        case ComponentType::meta_data:
        case ComponentType::summary_data:
            if (proposed.rows() != nat.rows || proposed.cols() != nat.cols)
                throw ValidationError("component '" + c.id + "': fixed-size component");
            return;
    }
}

void validate_layout(const Sheet& layout, const ResizePolicy& policy) {
    for (const auto& c : layout.components) {
        if (!c.rect) throw ValidationError("component '" + c.id + "' has no location");
        if (c.rect->top < 1 || c.rect->left < 1)
            throw ValidationError("component '" + c.id + "' is placed outside the sheet");
        validate_resize(c, *c.rect, policy);
    }
}

Sheet heuristic_place(const Sheet& processed, const PlacementConfig& cfg) {
    require_processed(processed);
    Sheet sheet = processed;
    sheet.grid.reset();  // re-placement invalidates any population-stage grid
    const int n = static_cast<int>(sheet.components.size());

    // The first title becomes the top banner; everything else is a block.
    int banner = -1;
    for (int i = 0; i < n; ++i)
        if (is_title(sheet.components[static_cast<size_t>(i)])) {
            banner = i;
            break;
        }
    int banner_rows = banner >= 0 ? natural_of(sheet.components[static_cast<size_t>(banner)]).rows : 0;

    std::map<std::string, int> index_of;
    for (int i = 0; i < n; ++i) index_of[sheet.components[static_cast<size_t>(i)].id] = i;
    DisjointSet groups(n);
    for (const auto& rel : sheet.relations) groups.unite(index_of.at(rel[0]), index_of.at(rel[1]));

    std::map<int, Block> by_root;
    long long block_area = 0;
    int widest = 1;
    for (int i = 0; i < n; ++i) {
        if (i == banner) continue;
        const Component& c = sheet.components[static_cast<size_t>(i)];
        Size nat = natural_of(c);
        if (nat.cols > cfg.max_cols || nat.rows > cfg.max_rows)
            throw ValidationError("component '" + c.id + "' exceeds the maximum sheet size");
        Block& b = by_root[groups.find(i)];
        b.members.push_back(i);
        b.rows += nat.rows;
        b.cols = std::max(b.cols, nat.cols);
        b.type_rank = std::min(b.type_rank, type_rank_of(c));
        block_area += static_cast<long long>(nat.rows) * nat.cols;
        widest = std::max(widest, nat.cols);
    }
    std::vector<Block> blocks;
    for (auto& [root, b] : by_root) {
        // Tables lead their group so summaries sit beneath their data.
        std::stable_sort(b.members.begin(), b.members.end(), [&](int a, int bb) {
            return type_rank_of(sheet.components[static_cast<size_t>(a)]) <
                   type_rank_of(sheet.components[static_cast<size_t>(bb)]);
        });
        blocks.push_back(b);
    }
    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
        if (a.type_rank != b.type_rank) return a.type_rank < b.type_rank;
        return a.rows * a.cols > b.rows * b.cols;
    });

    if (blocks.empty()) {
        if (banner >= 0) {
            Size nat = natural_of(sheet.components[static_cast<size_t>(banner)]);
            sheet.components[static_cast<size_t>(banner)].rect = CellRect{1, 1, nat.rows, nat.cols};
        }
        require_placed(sheet);
        return sheet;
    }

    // Shelf packing toward a near-golden overall width.
    double target = cfg.width_factor * std::sqrt(2.0 * static_cast<double>(block_area));
    int width = std::max(widest, static_cast<int>(target + 0.5));
    width = std::min(width, cfg.max_cols);
    int row = banner_rows + 1;
    int col = 1;
    int shelf = 0;
    for (Block& b : blocks) {
        if (col > 1 && col + b.cols - 1 > width) {
            row += shelf + cfg.margin;
            col = 1;
            shelf = 0;
        }
        b.pos = CellRef{row, col};
        commit_block(sheet, b);
        col += b.cols + cfg.margin;
        shelf = std::max(shelf, b.rows);
    }
    respan_banner(sheet, banner, banner_rows);

    std::vector<int> movable;
    for (int i = 0; i < n; ++i)
        if (i != banner) movable.push_back(i);
    local_search(sheet, movable, banner, banner_rows, cfg);

    require_placed(sheet);
    validate_layout(sheet, cfg.resize);
    return sheet;
}

std::vector<Sheet> generate_candidates(const Sheet& processed, const PlacementConfig& cfg) {
    if (cfg.candidates < 1) throw ValidationError("candidate count must be positive");
    static const double factors[3] = {1.0, 0.75, 1.3};
    std::vector<Sheet> out;
    out.reserve(static_cast<size_t>(cfg.candidates));
    for (int i = 0; i < cfg.candidates; ++i) {
        PlacementConfig c = cfg;
        c.seed = cfg.seed + static_cast<uint64_t>(i);
        c.width_factor = cfg.width_factor * factors[i % 3];
        out.push_back(heuristic_place(processed, c));
    }
    return out;
}

Sheet random_place(const Sheet& processed, const PlacementConfig& cfg) {
    require_processed(processed);
    Sheet sheet = processed;
    sheet.grid.reset();  // re-placement invalidates any population-stage grid
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
    auto draw = [&rng](int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); };

    long long area = 0;
    int widest = 1, tallest = 1;
    for (const auto& c : sheet.components) {
        Size nat = natural_of(c);
        if (nat.cols > cfg.max_cols || nat.rows > cfg.max_rows)
            throw ValidationError("component '" + c.id + "' exceeds the maximum sheet size");
        area += static_cast<long long>(nat.rows) * nat.cols;
        widest = std::max(widest, nat.cols);
        tallest = std::max(tallest, nat.rows);
    }
    int width = std::min(cfg.max_cols,
                         std::max(widest, static_cast<int>(std::sqrt(2.5 * static_cast<double>(area)) + 1.0)));
    int height = std::min(cfg.max_rows,
                          std::max(tallest, static_cast<int>(2.5 * static_cast<double>(area) / width + 1.0)));

    std::vector<CellRect> placed;
    for (auto& c : sheet.components) {
        Size nat = natural_of(c);
        bool ok = false;
        for (int expand = 0; expand < 64 && !ok; ++expand) {
            for (int attempt = 0; attempt < 400; ++attempt) {
                int top = 1 + draw(height - nat.rows + 1);
                int left = 1 + draw(width - nat.cols + 1);
                CellRect r{top, left, top + nat.rows - 1, left + nat.cols - 1};
                bool hit = false;
                for (const auto& p : placed)
                    if (rect_intersect(p, r)) {
                        hit = true;
                        break;
                    }
                if (!hit) {
                    c.rect = r;
                    placed.push_back(r);
                    ok = true;
                    break;
                }
            }
            if (!ok) height = std::min(cfg.max_rows, height + nat.rows);
        }
        if (!ok) throw ValidationError("could not place component '" + c.id + "' without overlap");
    }
    require_placed(sheet);
    return sheet;
}

}  // namespace gridsheet
