#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridsheet/sheet.hpp"

namespace gridsheet {

// Visual styling for sketches. Fills are SVG color keywords; every
// component type maps to a distinct hue.
struct StyleMap {
    std::map<ComponentType, std::string> fill = {
        {ComponentType::title, "gold"},
        {ComponentType::main_table, "steelblue"},
        {ComponentType::meta_data, "gray"},
        {ComponentType::summary_data, "green"},
        {ComponentType::chart, "salmon"},
    };
    bool gridlines = true;
    double label_size = 0.45;  // font size in cell units
};

// One drawn component: a filled rect plus its id label at the center.
struct SketchShape {
    std::string id;
    ComponentType type;
    double x = 0.0;  // cell units, origin at the top-left of cell A1
    double y = 0.0;
    double w = 1.0;
    double h = 1.0;
    std::string fill;
};

// Vector sketch document; rasterization is a separate step.
struct SketchDoc {
    int rows = 0;  // canvas extent in cells, anchored at A1
    int cols = 0;
    bool gridlines = true;
    double label_size = 0.45;
    std::vector<SketchShape> shapes;
};

// Canvas extent: every component fits in rows x cols starting at A1.
Size compute_grid_size(const Sheet& layout);

// Builds the sketch in layout order. Empty layouts are errors.
SketchDoc render_sketch(const Sheet& layout, const StyleMap& style = {});

// Deterministic, byte-stable SVG text for the document.
std::string to_svg(const SketchDoc& doc);

// Lossless PNG (8-bit RGB). cell_px must be >= 4; images over 8192 px on
// a side are rejected.
std::vector<uint8_t> rasterize(const SketchDoc& doc, int cell_px);

// Width/height in pixels of rasterize's output for this document.
std::pair<int, int> raster_dimensions(const SketchDoc& doc, int cell_px);

}  // namespace gridsheet
