#include "gridsheet/pixel_snap.hpp"

#include <algorithm>
#include <cmath>

#include "gridsheet/errors.hpp"

namespace gridsheet {

namespace {

void check_spec(const GridSpec& spec) {
    if (spec.bound_x <= 0.0 || spec.bound_y <= 0.0 || spec.cell_x <= 0.0 || spec.cell_y <= 0.0)
        throw ValidationError("canvas bounds and cell sizes must be positive");
}

long long round_half_even(double v) {
    double f = std::floor(v);
    double frac = v - f;
    auto base = static_cast<long long>(f);
    if (frac > 0.5) return base + 1;
    if (frac < 0.5) return base;
    return base % 2 == 0 ? base : base + 1;
}

// Snaps one axis: [lo, hi) in pixels onto 1-based cell indices [first, last].
void snap_axis(double lo, double hi, double cell, int count, int& first, int& last) {
    auto k0 = static_cast<int>(round_half_even(lo / cell));
    auto k1 = static_cast<int>(round_half_even(hi / cell));
    first = k0 + 1;
    last = k1;
    if (last < first) {
        // Collapsed: take the cell under the midpoint.
        int idx = static_cast<int>(std::floor((lo + hi) / (2.0 * cell))) + 1;
        first = idx;
        last = idx;
    }
    if (first < 1) {
        last += 1 - first;
        first = 1;
    }
    if (last > count) {
        first -= last - count;
        last = count;
        first = std::max(first, 1);
    }
}

}  // namespace

int GridSpec::cols() const {
    return static_cast<int>(std::ceil(bound_x / cell_x - 1e-9));
}

int GridSpec::rows() const {
    return static_cast<int>(std::ceil(bound_y / cell_y - 1e-9));
}

CellRect snap_rect(const PixelRect& r, const GridSpec& spec) {
    check_spec(spec);
    if (r.x0 < 0.0 || r.y0 < 0.0 || r.x1 < r.x0 || r.y1 < r.y0 ||
        !std::isfinite(r.x0) || !std::isfinite(r.y0) || !std::isfinite(r.x1) || !std::isfinite(r.y1))
        throw ValidationError("pixel rectangle must be finite, non-negative and ordered");
    int left = 0, right = 0, top = 0, bottom = 0;
    snap_axis(r.x0, r.x1, spec.cell_x, spec.cols(), left, right);
    snap_axis(r.y0, r.y1, spec.cell_y, spec.rows(), top, bottom);
    return CellRect{top, left, bottom, right};
}

SnapResult snap_layout(const std::vector<PixelRect>& rects, const GridSpec& spec) {
    check_spec(spec);
    double max_x = 0.0, max_y = 0.0;
    for (const auto& r : rects) {
        max_x = std::max(max_x, r.x1);
        max_y = std::max(max_y, r.y1);
    }
    double scale = 1.0;
    if (max_x > spec.bound_x) scale = spec.bound_x / max_x;
    if (max_y > spec.bound_y) scale = std::min(scale, spec.bound_y / max_y);

    SnapResult out;
    out.scale = scale;
    out.rects.reserve(rects.size());
    for (const auto& r : rects)
        out.rects.push_back(
            snap_rect(PixelRect{r.x0 * scale, r.y0 * scale, r.x1 * scale, r.y1 * scale}, spec));
    return out;
}

}  // namespace gridsheet
