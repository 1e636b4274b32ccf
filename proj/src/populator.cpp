#include "gridsheet/populator.hpp"

#include <algorithm>
#include <cmath>

#include "gridsheet/errors.hpp"

namespace gridsheet {

namespace {

std::string normalized(const std::string& text) {
    std::string out = text;
    std::replace(out.begin(), out.end(), '\n', ' ');
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (true) {
        size_t nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

size_t longest_line(const std::string& text) {
    size_t best = 0;
    for (const auto& line : split_lines(text)) best = std::max(best, line.size());
    return best;
}

// Spreads each region's pixel requirement evenly over the grid tracks it
// crosses and keeps the per-track maximum.
void apply_requirements(const Sheet& layout, const MetricConstants& mc, bool wrap_aware,
                        std::vector<double>& cols, std::vector<double>& rows) {
    for (const auto& c : layout.components) {
        if (!c.has_data()) continue;
        for (const auto& region : data_cell_regions(c)) {
            if (region.text->empty()) continue;
            size_t l;
            int n;
            if (wrap_aware) {
                l = longest_line(*region.text);
                n = static_cast<int>(std::count(region.text->begin(), region.text->end(), '\n')) + 1;
            } else {
                l = normalized(*region.text).size();
                n = 1;
            }
            double need_w = (mc.text_char_px * static_cast<double>(l) + mc.pad_h_px) /
                            (mc.col_unit_px * static_cast<double>(region.cells.cols()));
            for (int col = region.cells.left; col <= region.cells.right; ++col)
                cols[static_cast<size_t>(col - 1)] =
                    std::max(cols[static_cast<size_t>(col - 1)], need_w);
            if (wrap_aware) {
                double need_h = (mc.text_line_px * static_cast<double>(n) + mc.pad_v_px) /
                                static_cast<double>(region.cells.rows());
                for (int row = region.cells.top; row <= region.cells.bottom; ++row)
                    rows[static_cast<size_t>(row - 1)] =
                        std::max(rows[static_cast<size_t>(row - 1)], need_h);
            }
        }
    }
}

GridConfig build_grid(const Sheet& layout, const MetricConstants& mc, bool wrap_aware,
                      const FontModel& font) {
    require_placed(layout);
    CellRect box = bounding_box(layout);
    std::vector<double> cols(static_cast<size_t>(box.right), font.default_col_width);
    std::vector<double> rows(static_cast<size_t>(box.bottom), font.default_row_height);
    std::vector<double> col_req(static_cast<size_t>(box.right), 0.0);
    std::vector<double> row_req(static_cast<size_t>(box.bottom), 0.0);
    apply_requirements(layout, mc, wrap_aware, col_req, row_req);
    for (size_t i = 0; i < cols.size(); ++i)
        if (col_req[i] > 0.0) cols[i] = col_req[i];
    for (size_t i = 0; i < rows.size(); ++i)
        if (row_req[i] > 0.0) rows[i] = row_req[i];
    return GridConfig{cols, rows};
}

}  // namespace

std::vector<std::string> wrap_text(const std::string& text, int width) {
    if (width < 1) throw ValidationError("wrap width must be positive");
    const size_t w = static_cast<size_t>(width);
    std::vector<std::string> words;
    std::string word;
    for (char ch : normalized(text)) {
        if (ch == ' ' || ch == '\t') {
            if (!word.empty()) words.push_back(word);
            word.clear();
        } else {
            word.push_back(ch);
        }
    }
    if (!word.empty()) words.push_back(word);

    std::vector<std::string> lines;
    std::string cur;
    for (std::string piece : words) {
        if (!cur.empty() && cur.size() + 1 + piece.size() > w) {
            lines.push_back(cur);
            cur.clear();
        }
        while (piece.size() > w) {
            lines.push_back(piece.substr(0, w));
            piece = piece.substr(w);
        }
        if (piece.empty()) continue;
        if (cur.empty())
            cur = piece;
        else
            cur += " " + piece;
    }
    if (!cur.empty() || lines.empty()) lines.push_back(cur);
    return lines;
}

GridConfig fit_dimensions(const Sheet& layout, const MetricConstants& mc, const FontModel& font) {
    return build_grid(layout, mc, true, font);
}

GridConfig autofit_baseline(const Sheet& layout, const MetricConstants& mc, const FontModel& font) {
    return build_grid(layout, mc, false, font);
}

std::vector<Sheet> populate_candidates(const Sheet& placed, const PopulateConfig& cfg) {
    require_placed(placed);
    if (cfg.candidates < 1) throw ValidationError("candidate count must be positive");

    std::vector<size_t> lengths;
    for (const auto& c : placed.components)
        for (const auto& row : c.data)
            for (const auto& cell : row)
                if (!cell.empty()) lengths.push_back(normalized(cell).size());
    std::sort(lengths.begin(), lengths.end());
    size_t median = lengths.empty() ? 0 : lengths[(lengths.size() - 1) / 2];

    static const double factors[3] = {1.0, 0.8, 1.2};
    std::vector<Sheet> out;
    out.reserve(static_cast<size_t>(cfg.candidates));
    for (int k = 0; k < cfg.candidates; ++k) {
        Sheet cand = placed;
        if (median > 0) {
            int target = std::max(
                1, static_cast<int>(std::lround(factors[k % 3] * static_cast<double>(median))));
            for (auto& c : cand.components)
                for (auto& row : c.data)
                    for (auto& cell : row) {
                        if (cell.empty()) continue;
                        auto lines = wrap_text(cell, target);
                        std::string joined = lines[0];
                        for (size_t i = 1; i < lines.size(); ++i) joined += "\n" + lines[i];
                        cell = joined;
                    }
        }
        cand.grid = fit_dimensions(cand, cfg.metrics, cfg.font);
        out.push_back(std::move(cand));
    }
    return out;
}

Sheet populate(const Sheet& placed, const PopulateConfig& cfg) {
    auto candidates = populate_candidates(placed, cfg);
    std::vector<ScoreReport> reports;
    reports.reserve(candidates.size());
    for (const auto& cand : candidates) reports.push_back(evaluate(cand, cfg.metrics, cfg.weights));
    return candidates[rank(reports, cfg.weights)];
}

}  // namespace gridsheet
