#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridsheet/errors.hpp"

namespace gridsheet {

// 1-based cell coordinate. "C3" means column 3, row 3; column letters are
// bijective base-26 (A=1 .. Z=26, AA=27).
struct CellRef {
    int row = 1;
    int col = 1;

    friend bool operator==(const CellRef&, const CellRef&) = default;
};

// Inclusive rectangular cell range (top-left / bottom-right corners).
struct CellRect {
    int top = 1;
    int left = 1;
    int bottom = 1;
    int right = 1;

    int rows() const { return bottom - top + 1; }
    int cols() const { return right - left + 1; }
    long long cell_count() const { return static_cast<long long>(rows()) * cols(); }
    bool contains(const CellRef& c) const {
        return c.row >= top && c.row <= bottom && c.col >= left && c.col <= right;
    }

    friend bool operator==(const CellRect&, const CellRect&) = default;
};

// Column widths (spreadsheet width units) and row heights (points).
// Index 0 corresponds to column A / row 1.
struct GridConfig {
    std::vector<double> col_widths;
    std::vector<double> row_heights;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

// Parses an A1-style reference. Lowercase letters are accepted; malformed
// input raises ParseError naming the offending character position.
CellRef parse_cell(std::string_view s);

// Formats with uppercase column letters ("C3", "AA10").
std::string format_cell(const CellRef& c);

// Normalizes two corners into a CellRect regardless of their order.
CellRect make_rect(const CellRef& a, const CellRef& b);

// Parses "A1:C3". Swapped corners normalize; "C3:A1" == "A1:C3".
CellRect parse_range(std::string_view s);

std::string format_range(const CellRect& r);

// Intersection of two inclusive ranges, or nullopt when disjoint.
std::optional<CellRect> rect_intersect(const CellRect& a, const CellRect& b);

// Area of r under g: sum of spanned column widths times sum of spanned row
// heights. r must lie inside g's extent (bounds error otherwise).
double weighted_area(const CellRect& r, const GridConfig& g);

// All widths/heights equal to 1.
GridConfig unit_grid(int rows, int cols);

}  // namespace gridsheet
