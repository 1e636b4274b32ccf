#pragma once

#include <vector>

#include "gridsheet/grid.hpp"

namespace gridsheet {

// Axis-aligned pixel rectangle, origin top-left, edges in [x0, x1) x [y0, y1).
struct PixelRect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;
};

// Target canvas: a bound_x by bound_y pixel canvas divided into cell_x by
// cell_y cells.
struct GridSpec {
    double bound_x = 1000.0;
    double bound_y = 500.0;
    double cell_x = 50.0;
    double cell_y = 25.0;

    int cols() const;
    int rows() const;
};

struct SnapResult {
    std::vector<CellRect> rects;
    double scale = 1.0;  // uniform factor applied before snapping (<= 1)
};

// Snaps one in-range rect: every edge moves to its nearest cell boundary
// (ties round to the even boundary index), rects that collapse expand to
// the single cell under their midpoint, and the result is shifted to stay
// inside the grid. Edge displacement never exceeds half a cell except for
// the collapse expansion, which stays within one cell.
CellRect snap_rect(const PixelRect& r, const GridSpec& spec = {});

// Uniformly scales the whole layout down when it overflows the canvas,
// then snaps every rect.
SnapResult snap_layout(const std::vector<PixelRect>& rects, const GridSpec& spec = {});

}  // namespace gridsheet
