#include "gridsheet/sheet.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gridsheet {

using nlohmann::json;

std::string to_string(ComponentType t) {
    switch (t) {
        case ComponentType::title: return "title";
        case ComponentType::main_table: return "main_table";
        case ComponentType::meta_data: return "meta_data";
        case ComponentType::summary_data: return "summary_data";
        case ComponentType::chart: return "chart";
    }
    throw ValidationError("unknown component type value");
}

ComponentType component_type_from_string(const std::string& s) {
    for (ComponentType t : all_component_types())
        if (to_string(t) == s) return t;
    throw ValidationError("unknown component type \"" + s + "\"");
}

const std::vector<ComponentType>& all_component_types() {
    static const std::vector<ComponentType> types = {
        ComponentType::title, ComponentType::main_table, ComponentType::meta_data,
        ComponentType::summary_data, ComponentType::chart};
    return types;
}

const std::vector<std::string>& topic_vocabulary() {
    static const std::vector<std::string> topics = {
        "Financial Management and Forecasting",
        "Data and Task Logs",
        "Staff Scheduling and Shift Management",
        "Performance and KPI Dashboards",
        "Event Scheduling and Planning",
        "Inventory and Asset Management",
        "Report and Publication Tracking",
        "Maintenance Scheduling",
        "Marketing Campaign Tracking",
        "Project Scheduling",
        "To-do Lists and Calendars",
        "Travel Itinerary and Planning",
        "Goal and Habit Tracking",
    };
    return topics;
}

bool is_known_topic(const std::string& topic) {
    const auto& v = topic_vocabulary();
    return std::find(v.begin(), v.end(), topic) != v.end();
}

Size Component::natural() const {
    if (!data.empty()) return Size{static_cast<int>(data.size()), static_cast<int>(data[0].size())};
    if (declared_size) return *declared_size;
    throw ValidationError("component \"" + id + "\" has neither data nor a declared size");
}

const Component* Sheet::find(const std::string& id) const {
    for (const auto& c : components)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

CellRect parse_location(const json& loc, const std::string& id) {
    if (loc.is_string()) return parse_range(loc.get<std::string>());
    if (loc.is_array() && loc.size() == 2 && loc[0].is_string() && loc[1].is_string())
        return make_rect(parse_cell(loc[0].get<std::string>()), parse_cell(loc[1].get<std::string>()));
    throw ValidationError("component \"" + id + "\": location must be \"A1:C3\" or [\"A1\",\"C3\"]");
}

Component parse_component(const json& j) {
    if (!j.is_object()) throw ValidationError("component entries must be objects");
    Component c;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
        throw ValidationError("every component needs a non-empty string id");
    c.id = j["id"].get<std::string>();

    if (j.contains("type")) {
        if (!j["type"].is_string()) throw ValidationError("component \"" + c.id + "\": type must be a string");
        c.type = component_type_from_string(j["type"].get<std::string>());
    }
    if (j.contains("data")) {
        const json& d = j["data"];
        if (!d.is_array() || d.empty()) throw ValidationError("component \"" + c.id + "\": data must be a non-empty array of rows");
        size_t width = 0;
        for (const json& row : d) {
            if (!row.is_array() || row.empty())
                throw ValidationError("component \"" + c.id + "\": data rows must be non-empty arrays");
            if (width == 0) width = row.size();
            if (row.size() != width)
                throw ValidationError("component \"" + c.id + "\": ragged data rows (" +
                                      std::to_string(row.size()) + " vs " + std::to_string(width) + " cells)");
            std::vector<std::string> cells;
            for (const json& cell : row) {
                if (cell.is_string()) cells.push_back(cell.get<std::string>());
                else if (cell.is_number_integer()) cells.push_back(std::to_string(cell.get<long long>()));
                else if (cell.is_number()) { std::ostringstream os; os << cell.get<double>(); cells.push_back(os.str()); }
                else if (cell.is_null()) cells.emplace_back();
                else throw ValidationError("component \"" + c.id + "\": cells must be strings, numbers or null");
            }
            c.data.push_back(std::move(cells));
        }
    }
    if (j.contains("size")) {
        const json& s = j["size"];
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
            throw ValidationError("component \"" + c.id + "\": size must be [rows, cols]");
        Size sz{s[0].get<int>(), s[1].get<int>()};
        if (sz.rows < 1 || sz.cols < 1)
            throw ValidationError("component \"" + c.id + "\": size must be positive");
        c.declared_size = sz;
    }
    if (c.data.empty() && !c.declared_size)
        throw ValidationError("component \"" + c.id + "\" needs data or an explicit size");
    if (j.contains("description")) {
        if (!j["description"].is_string())
            throw ValidationError("component \"" + c.id + "\": description must be a string");
        c.description = j["description"].get<std::string>();
    }
    if (j.contains("location")) c.rect = parse_location(j["location"], c.id);
    return c;
}

}  // namespace

Sheet load_sheet(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sheet JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("components") || !j["components"].is_array())
        throw ValidationError("sheet JSON must be an object with a \"components\" array");

    Sheet s;
    std::set<std::string> ids;
    for (const json& jc : j["components"]) {
        Component c = parse_component(jc);
        if (!ids.insert(c.id).second) throw ValidationError("duplicate component id \"" + c.id + "\"");
        s.components.push_back(std::move(c));
    }
    if (j.contains("topic")) {
        if (!j["topic"].is_string()) throw ValidationError("topic must be a string");
        const std::string topic = j["topic"].get<std::string>();
        if (!is_known_topic(topic)) throw ValidationError("unknown topic \"" + topic + "\"");
        s.topic = topic;
    }
    if (j.contains("relations")) {
        if (!j["relations"].is_array()) throw ValidationError("relations must be an array of id pairs");
        for (const json& jr : j["relations"]) {
            if (!jr.is_array() || jr.size() != 2 || !jr[0].is_string() || !jr[1].is_string())
                throw ValidationError("each relation must be a two-element array of component ids");
            Relation r{jr[0].get<std::string>(), jr[1].get<std::string>()};
            for (const std::string& id : r)
                if (!ids.count(id)) throw ValidationError("relation references unknown component \"" + id + "\"");
            if (r[0] == r[1]) throw ValidationError("relation must join two distinct components, got \"" + r[0] + "\" twice");
            s.relations.push_back(std::move(r));
        }
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object() || !g.contains("col_widths") || !g.contains("row_heights"))
            throw ValidationError("grid must contain col_widths and row_heights arrays");
        GridConfig grid;
        for (const json& w : g["col_widths"]) grid.col_widths.push_back(w.get<double>());
        for (const json& h : g["row_heights"]) grid.row_heights.push_back(h.get<double>());
        for (double w : grid.col_widths)
            if (!(w > 0.0)) throw ValidationError("grid column widths must be positive");
        for (double h : grid.row_heights)
            if (!(h > 0.0)) throw ValidationError("grid row heights must be positive");
        s.grid = std::move(grid);
    }
    // Grid, when present, must cover every placed component.
    if (s.grid) {
        for (const auto& c : s.components) {
            if (!c.rect) continue;
            if (c.rect->bottom > static_cast<int>(s.grid->row_heights.size()) ||
                c.rect->right > static_cast<int>(s.grid->col_widths.size()))
                throw ValidationError("grid extent does not cover component \"" + c.id + "\" at " +
                                      format_range(*c.rect));
        }
    }
    return s;
}

Sheet load_sheet_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open sheet file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_sheet(buf.str());
}

std::string serialize_sheet(const Sheet& s) {
    json j;
    j["components"] = json::array();
    for (const auto& c : s.components) {
        json jc;
        jc["id"] = c.id;
        if (c.type) jc["type"] = to_string(*c.type);
        if (!c.data.empty()) jc["data"] = c.data;
        if (c.declared_size) jc["size"] = {c.declared_size->rows, c.declared_size->cols};
        if (!c.description.empty()) jc["description"] = c.description;
        if (c.rect) jc["location"] = format_range(*c.rect);
        j["components"].push_back(std::move(jc));
    }
    if (s.topic) j["topic"] = *s.topic;
    if (!s.relations.empty()) {
        j["relations"] = json::array();
        for (const auto& r : s.relations) j["relations"].push_back({r[0], r[1]});
    }
    if (s.grid) {
        j["grid"]["col_widths"] = s.grid->col_widths;
        j["grid"]["row_heights"] = s.grid->row_heights;
    }
    return j.dump(2) + "\n";
}

void save_sheet_file(const Sheet& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write sheet file \"" + path + "\"");
    out << serialize_sheet(s);
    if (!out) throw IoError("failed writing sheet file \"" + path + "\"");
}

CellRect bounding_box(const Sheet& layout) {
    if (layout.components.empty()) throw ValidationError("bounding_box of an empty sheet");
    bool first = true;
    CellRect box;
    for (const auto& c : layout.components) {
        if (!c.rect) throw ValidationError("component \"" + c.id + "\" has no location");
        if (first) {
            box = *c.rect;
            first = false;
        } else {
            box.top = std::min(box.top, c.rect->top);
            box.left = std::min(box.left, c.rect->left);
            box.bottom = std::max(box.bottom, c.rect->bottom);
            box.right = std::max(box.right, c.rect->right);
        }
    }
    return box;
}

void require_processed(const Sheet& s) {
    if (s.components.empty()) throw ValidationError("sheet has no components");
    for (const auto& c : s.components)
        if (!c.type) throw ValidationError("component \"" + c.id + "\" has no type; pre-process the sheet first");
    if (!s.topic) throw ValidationError("sheet has no topic; pre-process the sheet first");
}

void require_placed(const Sheet& s) {
    if (s.components.empty()) throw ValidationError("sheet has no components");
    for (const auto& c : s.components)
        if (!c.rect) throw ValidationError("component \"" + c.id + "\" has no location; place the sheet first");
}

namespace {

// Distributes `count` data indices over `extent` grid lines as contiguous
// bands: index i covers [floor(i*extent/count), floor((i+1)*extent/count)-1],
// clamped so every index keeps at least one line when extent < count.
std::pair<int, int> band(int i, int count, int extent) {
    int lo = static_cast<int>(static_cast<long long>(i) * extent / count);
    int hi = static_cast<int>(static_cast<long long>(i + 1) * extent / count) - 1;
    lo = std::min(lo, extent - 1);
    hi = std::clamp(hi, lo, extent - 1);
    return {lo, hi};
}

}  // namespace

std::vector<DataCellRegion> data_cell_regions(const Component& c) {
    std::vector<DataCellRegion> out;
    if (!c.has_data()) return out;
    if (!c.rect) throw ValidationError("component \"" + c.id + "\" has no location");
    const int data_rows = static_cast<int>(c.data.size());
    const int data_cols = static_cast<int>(c.data[0].size());
    const int rect_rows = c.rect->rows();
    const int rect_cols = c.rect->cols();
    const bool stretch = c.type == ComponentType::title || c.type == ComponentType::chart;

    for (int i = 0; i < data_rows; ++i) {
        std::pair<int, int> rb;
        if (data_rows == rect_rows) rb = {i, i};
        else if (stretch) rb = band(i, data_rows, rect_rows);
        else rb = {std::min(i, rect_rows - 1), std::min(i, rect_rows - 1)};  // grown table: rows map 1:1 from the top
        for (int jcol = 0; jcol < data_cols; ++jcol) {
            std::pair<int, int> cb;
            if (data_cols == rect_cols) cb = {jcol, jcol};
            else if (stretch) cb = band(jcol, data_cols, rect_cols);
            else cb = {std::min(jcol, rect_cols - 1), std::min(jcol, rect_cols - 1)};
            DataCellRegion r;
            r.data_row = i;
            r.data_col = jcol;
            r.cells = CellRect{c.rect->top + rb.first, c.rect->left + cb.first,
                               c.rect->top + rb.second, c.rect->left + cb.second};
            r.text = &c.data[i][jcol];
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace gridsheet
