#include "gridsheet/grid.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace gridsheet {

namespace {

constexpr int k_max_row = 10'000'000;
constexpr int k_max_col = 10'000'000;

[[noreturn]] void bad_char(std::string_view s, size_t pos, const char* expected) {
    throw ParseError("invalid cell reference \"" + std::string(s) + "\": expected " + expected +
                     " at position " + std::to_string(pos));
}

}  // namespace

CellRef parse_cell(std::string_view s) {
    if (s.empty()) throw ParseError("invalid cell reference \"\": empty string");
    size_t i = 0;
    long long col = 0;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
        const int v = std::toupper(static_cast<unsigned char>(s[i])) - 'A' + 1;
        col = col * 26 + v;
        if (col > k_max_col) throw ParseError("cell reference \"" + std::string(s) + "\": column out of range");
        ++i;
    }
    if (i == 0) bad_char(s, 0, "column letter");
    if (i == s.size()) bad_char(s, i, "row digits");
    if (s[i] == '0') bad_char(s, i, "nonzero row digit");
    long long row = 0;
    const size_t digits_at = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        row = row * 10 + (s[i] - '0');
        if (row > k_max_row) throw ParseError("cell reference \"" + std::string(s) + "\": row out of range");
        ++i;
    }
    if (i == digits_at) bad_char(s, i, "row digits");
    if (i != s.size()) bad_char(s, i, "end of input");
    return CellRef{static_cast<int>(row), static_cast<int>(col)};
}

std::string format_cell(const CellRef& c) {
    if (c.row < 1 || c.col < 1) throw ValidationError("cell reference must be positive, got row=" +
                                                      std::to_string(c.row) + " col=" + std::to_string(c.col));
    std::string letters;
    int col = c.col;
    while (col > 0) {
        const int rem = (col - 1) % 26;
        letters.push_back(static_cast<char>('A' + rem));
        col = (col - 1) / 26;
    }
    std::reverse(letters.begin(), letters.end());
    return letters + std::to_string(c.row);
}

CellRect make_rect(const CellRef& a, const CellRef& b) {
    CellRect r;
    r.top = std::min(a.row, b.row);
    r.bottom = std::max(a.row, b.row);
    r.left = std::min(a.col, b.col);
    r.right = std::max(a.col, b.col);
    return r;
}

CellRect parse_range(std::string_view s) {
    const size_t colon = s.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("invalid range \"" + std::string(s) + "\": missing ':'");
    if (s.find(':', colon + 1) != std::string_view::npos)
        throw ParseError("invalid range \"" + std::string(s) + "\": more than one ':'");
    return make_rect(parse_cell(s.substr(0, colon)), parse_cell(s.substr(colon + 1)));
}

std::string format_range(const CellRect& r) {
    return format_cell(CellRef{r.top, r.left}) + ":" + format_cell(CellRef{r.bottom, r.right});
}

std::optional<CellRect> rect_intersect(const CellRect& a, const CellRect& b) {
    CellRect r;
    r.top = std::max(a.top, b.top);
    r.bottom = std::min(a.bottom, b.bottom);
    r.left = std::max(a.left, b.left);
    r.right = std::min(a.right, b.right);
    if (r.top > r.bottom || r.left > r.right) return std::nullopt;
    return r;
}

double weighted_area(const CellRect& r, const GridConfig& g) {
    if (r.top < 1 || r.left < 1 || r.bottom > static_cast<int>(g.row_heights.size()) ||
        r.right > static_cast<int>(g.col_widths.size())) {
        throw ValidationError("range " + format_range(r) + " outside grid extent " +
                              std::to_string(g.row_heights.size()) + "x" + std::to_string(g.col_widths.size()));
    }
    const double w = std::accumulate(g.col_widths.begin() + (r.left - 1), g.col_widths.begin() + r.right, 0.0);
    const double h = std::accumulate(g.row_heights.begin() + (r.top - 1), g.row_heights.begin() + r.bottom, 0.0);
    return w * h;
}

GridConfig unit_grid(int rows, int cols) {
    if (rows < 0 || cols < 0) throw ValidationError("unit_grid dimensions must be non-negative");
    GridConfig g;
    g.col_widths.assign(static_cast<size_t>(cols), 1.0);
    g.row_heights.assign(static_cast<size_t>(rows), 1.0);
    return g;
}

}  // namespace gridsheet
