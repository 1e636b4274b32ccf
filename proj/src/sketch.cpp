#include "gridsheet/sketch.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace gridsheet {

namespace {

constexpr int k_min_cell_px = 4;
constexpr int k_max_raster_side = 8192;
constexpr int k_svg_px_per_cell = 100;  // nominal display size only

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Rgb {
    uint8_t r, g, b;
};

Rgb parse_color(const std::string& name) {
    static const std::map<std::string, Rgb> keywords = {
        {"gold", {255, 215, 0}},   {"steelblue", {70, 130, 180}}, {"gray", {128, 128, 128}},
        {"green", {0, 128, 0}},    {"salmon", {250, 128, 114}},   {"white", {255, 255, 255}},
        {"black", {0, 0, 0}},
    };
    if (const auto it = keywords.find(name); it != keywords.end()) return it->second;
    if (name.size() == 7 && name[0] == '#') {
        auto hex = [&](size_t i) {
            return static_cast<uint8_t>(std::stoi(name.substr(i, 2), nullptr, 16));
        };
        return {hex(1), hex(3), hex(5)};
    }
    throw ValidationError("unsupported sketch color \"" + name + "\"");
}

// 5x7 glyphs for id labels; '#' marks a lit pixel.
const char* const* glyph_rows(char c) {
    static const std::map<char, std::array<const char*, 7>> font = {
        {'0', {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "}},
        {'1', {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "}},
        {'2', {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"}},
        {'3', {" ### ", "#   #", "    #", "  ## ", "    #", "#   #", " ### "}},
        {'4', {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "}},
        {'5', {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "}},
        {'6', {" ### ", "#    ", "#    ", "#### ", "#   #", "#   #", " ### "}},
        {'7', {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "}},
        {'8', {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "}},
        {'9', {" ### ", "#   #", "#   #", " ####", "    #", "    #", " ### "}},
        {'A', {" ### ", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"}},
        {'B', {"#### ", "#   #", "#   #", "#### ", "#   #", "#   #", "#### "}},
        {'C', {" ### ", "#   #", "#    ", "#    ", "#    ", "#   #", " ### "}},
        {'D', {"#### ", "#   #", "#   #", "#   #", "#   #", "#   #", "#### "}},
        {'E', {"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#####"}},
        {'F', {"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#    "}},
        {'G', {" ### ", "#   #", "#    ", "# ###", "#   #", "#   #", " ### "}},
        {'H', {"#   #", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"}},
        {'I', {" ### ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "}},
        {'J', {"  ###", "   # ", "   # ", "   # ", "   # ", "#  # ", " ##  "}},
        {'K', {"#   #", "#  # ", "# #  ", "##   ", "# #  ", "#  # ", "#   #"}},
        {'L', {"#    ", "#    ", "#    ", "#    ", "#    ", "#    ", "#####"}},
        {'M', {"#   #", "## ##", "# # #", "# # #", "#   #", "#   #", "#   #"}},
        {'N', {"#   #", "##  #", "# # #", "#  ##", "#   #", "#   #", "#   #"}},
        {'O', {" ### ", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "}},
        {'P', {"#### ", "#   #", "#   #", "#### ", "#    ", "#    ", "#    "}},
        {'Q', {" ### ", "#   #", "#   #", "#   #", "# # #", "#  # ", " ## #"}},
        {'R', {"#### ", "#   #", "#   #", "#### ", "# #  ", "#  # ", "#   #"}},
        {'S', {" ####", "#    ", "#    ", " ### ", "    #", "    #", "#### "}},
        {'T', {"#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  "}},
        {'U', {"#   #", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "}},
        {'V', {"#   #", "#   #", "#   #", "#   #", "#   #", " # # ", "  #  "}},
        {'W', {"#   #", "#   #", "#   #", "# # #", "# # #", "## ##", "#   #"}},
        {'X', {"#   #", "#   #", " # # ", "  #  ", " # # ", "#   #", "#   #"}},
        {'Y', {"#   #", "#   #", " # # ", "  #  ", "  #  ", "  #  ", "  #  "}},
        {'Z', {"#####", "    #", "   # ", "  #  ", " #   ", "#    ", "#####"}},
        {'_', {"     ", "     ", "     ", "     ", "     ", "     ", "#####"}},
        {'-', {"     ", "     ", "     ", "#####", "     ", "     ", "     "}},
    };
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto it = font.find(up);
    return it == font.end() ? nullptr : it->second.data();
}

// ------------------------------------------------------------ PNG writing

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void put_chunk(std::vector<uint8_t>& out, const char type[4], const std::vector<uint8_t>& data) {
    put_u32(out, static_cast<uint32_t>(data.size()));
    const size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uint32_t crc = static_cast<uint32_t>(
        crc32(0L, out.data() + type_at, static_cast<uInt>(4 + data.size())));
    put_u32(out, crc);
}

std::vector<uint8_t> encode_png(const std::vector<uint8_t>& rgb, int width, int height) {
    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(height) * (1 + static_cast<size_t>(width) * 3));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter: none
        const size_t row = static_cast<size_t>(y) * width * 3;
        raw.insert(raw.end(), rgb.begin() + row, rgb.begin() + row + static_cast<size_t>(width) * 3);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw Error("png deflate failed");
    compressed.resize(bound);

    std::vector<uint8_t> png = {137, 80, 78, 71, 13, 10, 26, 10};
    std::vector<uint8_t> ihdr;
    put_u32(ihdr, static_cast<uint32_t>(width));
    put_u32(ihdr, static_cast<uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    put_chunk(png, "IHDR", ihdr);
    put_chunk(png, "IDAT", compressed);
    put_chunk(png, "IEND", {});
    return png;
}

struct Canvas {
    int w = 0, h = 0;
    std::vector<uint8_t> px;  // rgb rows

    void fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, w);
        y1 = std::min(y1, h);
        for (int y = y0; y < y1; ++y) {
            size_t at = (static_cast<size_t>(y) * w + x0) * 3;
            for (int x = x0; x < x1; ++x) {
                px[at++] = c.r;
                px[at++] = c.g;
                px[at++] = c.b;
            }
        }
    }
};

void draw_label(Canvas& canvas, const SketchShape& shape, int cell_px) {
    const std::string& text = shape.id;
    if (text.empty()) return;
    const int scale = std::max(1, cell_px / 12);
    const int glyph_w = 6 * scale;  // 5 px glyph + 1 px gap
    const int text_w = glyph_w * static_cast<int>(text.size()) - scale;
    const int text_h = 7 * scale;
    const int cx = static_cast<int>((shape.x + shape.w / 2.0) * cell_px);
    const int cy = static_cast<int>((shape.y + shape.h / 2.0) * cell_px);
    int x = cx - text_w / 2;
    const int y = cy - text_h / 2;
    // Clip the label to its own rect so crowded sketches stay readable.
    const int rx0 = static_cast<int>(shape.x * cell_px), ry0 = static_cast<int>(shape.y * cell_px);
    const int rx1 = static_cast<int>((shape.x + shape.w) * cell_px);
    const int ry1 = static_cast<int>((shape.y + shape.h) * cell_px);
    const Rgb ink{17, 17, 17};
    for (char c : text) {
        if (const char* const* rows = glyph_rows(c)) {
            for (int gy = 0; gy < 7; ++gy)
                for (int gx = 0; gx < 5; ++gx)
                    if (rows[gy][gx] == '#')
                        canvas.fill_rect(std::max(x + gx * scale, rx0), std::max(y + gy * scale, ry0),
                                         std::min(x + (gx + 1) * scale, rx1),
                                         std::min(y + (gy + 1) * scale, ry1), ink);
        }
        x += glyph_w;
    }
}

}  // namespace

Size compute_grid_size(const Sheet& layout) {
    if (layout.components.empty()) throw ValidationError("cannot sketch an empty layout");
    int rows = 0, cols = 0;
    for (const auto& c : layout.components) {
        if (!c.rect) throw ValidationError("component \"" + c.id + "\" has no location");
        rows = std::max(rows, c.rect->bottom);
        cols = std::max(cols, c.rect->right);
    }
    return Size{rows, cols};
}

SketchDoc render_sketch(const Sheet& layout, const StyleMap& style) {
    const Size extent = compute_grid_size(layout);
    SketchDoc doc;
    doc.rows = extent.rows;
    doc.cols = extent.cols;
    doc.gridlines = style.gridlines;
    doc.label_size = style.label_size;
    for (const auto& c : layout.components) {
        if (!c.type) throw ValidationError("component \"" + c.id + "\" has no type");
        SketchShape s;
        s.id = c.id;
        s.type = *c.type;
        s.x = c.rect->left - 1;
        s.y = c.rect->top - 1;
        s.w = c.rect->cols();
        s.h = c.rect->rows();
        const auto it = style.fill.find(*c.type);
        if (it == style.fill.end()) throw ValidationError("style map lacks a fill for " + to_string(*c.type));
        s.fill = it->second;
        doc.shapes.push_back(std::move(s));
    }
    return doc;
}

std::string to_svg(const SketchDoc& doc) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << doc.cols * k_svg_px_per_cell
        << "\" height=\"" << doc.rows * k_svg_px_per_cell << "\" viewBox=\"0 0 " << doc.cols << " "
        << doc.rows << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << doc.cols << "\" height=\"" << doc.rows
        << "\" fill=\"white\"/>\n";
    if (doc.gridlines) {
        out << "<g stroke=\"#d9d9d9\" stroke-width=\"0.02\">\n";
        for (int c = 1; c < doc.cols; ++c)
            out << "<line x1=\"" << c << "\" y1=\"0\" x2=\"" << c << "\" y2=\"" << doc.rows << "\"/>\n";
        for (int r = 1; r < doc.rows; ++r)
            out << "<line x1=\"0\" y1=\"" << r << "\" x2=\"" << doc.cols << "\" y2=\"" << r << "\"/>\n";
        out << "</g>\n";
    }
    for (const auto& s : doc.shapes) {
        out << "<rect x=\"" << fmt_num(s.x) << "\" y=\"" << fmt_num(s.y) << "\" width=\"" << fmt_num(s.w)
            << "\" height=\"" << fmt_num(s.h) << "\" fill=\"" << s.fill
            << "\" stroke=\"#333333\" stroke-width=\"0.03\"/>\n";
        out << "<text x=\"" << fmt_num(s.x + s.w / 2.0) << "\" y=\"" << fmt_num(s.y + s.h / 2.0)
            << "\" font-size=\"" << fmt_num(doc.label_size)
            << "\" font-family=\"monospace\" text-anchor=\"middle\" dominant-baseline=\"central\""
            << " fill=\"#111111\">" << escape_xml(s.id) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::pair<int, int> raster_dimensions(const SketchDoc& doc, int cell_px) {
    return {doc.cols * cell_px, doc.rows * cell_px};
}

std::vector<uint8_t> rasterize(const SketchDoc& doc, int cell_px) {
    if (cell_px < k_min_cell_px)
        throw ValidationError("cell_px must be at least " + std::to_string(k_min_cell_px));
    const auto [width, height] = raster_dimensions(doc, cell_px);
    if (width > k_max_raster_side || height > k_max_raster_side)
        throw ValidationError("raster " + std::to_string(width) + "x" + std::to_string(height) +
                              " exceeds the " + std::to_string(k_max_raster_side) + " px limit");
    if (width <= 0 || height <= 0) throw ValidationError("cannot rasterize an empty sketch");

    Canvas canvas;
    canvas.w = width;
    canvas.h = height;
    canvas.px.assign(static_cast<size_t>(width) * height * 3, 255);

    const Rgb grid_color{217, 217, 217};
    if (doc.gridlines) {
        for (int c = 1; c < doc.cols; ++c) canvas.fill_rect(c * cell_px, 0, c * cell_px + 1, height, grid_color);
        for (int r = 1; r < doc.rows; ++r) canvas.fill_rect(0, r * cell_px, width, r * cell_px + 1, grid_color);
    }
    const Rgb border{51, 51, 51};
    for (const auto& s : doc.shapes) {
        const int x0 = static_cast<int>(s.x * cell_px), y0 = static_cast<int>(s.y * cell_px);
        const int x1 = static_cast<int>((s.x + s.w) * cell_px), y1 = static_cast<int>((s.y + s.h) * cell_px);
        canvas.fill_rect(x0, y0, x1, y1, parse_color(s.fill));
        canvas.fill_rect(x0, y0, x1, y0 + 1, border);
        canvas.fill_rect(x0, y1 - 1, x1, y1, border);
        canvas.fill_rect(x0, y0, x0 + 1, y1, border);
        canvas.fill_rect(x1 - 1, y0, x1, y1, border);
    }
    for (const auto& s : doc.shapes) draw_label(canvas, s, cell_px);
    return encode_png(canvas.px, width, height);
}

}  // namespace gridsheet
