#pragma once

// Shared fixture builders for tests. Layouts here are built directly from
// ranges; content defaults to a single "x" cell per component so data-less
// validation never interferes with geometry-only checks.

#include <random>
#include <string>
#include <vector>

#include "gridsheet/sheet.hpp"

namespace testutil {

inline gridsheet::Component comp(const std::string& id, gridsheet::ComponentType type, const std::string& range) {
    gridsheet::Component c;
    c.id = id;
    c.type = type;
    c.rect = gridsheet::parse_range(range);
    c.data = {{"x"}};
    return c;
}

inline gridsheet::Sheet layout_of(std::initializer_list<gridsheet::Component> comps) {
    gridsheet::Sheet s;
    for (const auto& c : comps) s.components.push_back(c);
    return s;
}

// Random possibly-overlapping layout within a max_dim x max_dim unit grid.
inline gridsheet::Sheet random_layout(std::mt19937& rng, int max_dim, int max_comps) {
    using namespace gridsheet;
    std::uniform_int_distribution<int> n_comps(1, max_comps);
    std::uniform_int_distribution<int> coord(1, max_dim);
    const int n = n_comps(rng);
    Sheet s;
    const auto& types = all_component_types();
    for (int i = 0; i < n; ++i) {
        Component c;
        c.id = "K" + std::to_string(i + 1);
        c.type = types[static_cast<size_t>(rng() % types.size())];
        const int r1 = coord(rng), r2 = coord(rng), c1 = coord(rng), c2 = coord(rng);
        c.rect = make_rect(CellRef{r1, c1}, CellRef{r2, c2});
        c.data = {{"x"}};
        s.components.push_back(std::move(c));
    }
    return s;
}

}  // namespace testutil
