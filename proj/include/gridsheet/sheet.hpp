#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridsheet/grid.hpp"

namespace gridsheet {

enum class ComponentType { title, main_table, meta_data, summary_data, chart };

// Stable serialized names ("title", "main_table", ...).
std::string to_string(ComponentType t);
ComponentType component_type_from_string(const std::string& s);
const std::vector<ComponentType>& all_component_types();

// The closed topic vocabulary. Topic strings are validated by exact match.
const std::vector<std::string>& topic_vocabulary();
bool is_known_topic(const std::string& topic);

// Rows x columns of a component's content.
struct Size {
    int rows = 1;
    int cols = 1;

    friend bool operator==(const Size&, const Size&) = default;
};

using CellGrid = std::vector<std::vector<std::string>>;

// One spreadsheet component at any pipeline stage. `type`, `rect` and the
// line-break markers inside `data` are filled in as the document moves
// through pre-processing, placement and population.
struct Component {
    std::string id;
    std::optional<ComponentType> type;
    CellGrid data;                      // rectangular; empty for description-only components
    std::optional<Size> declared_size;  // required when data is empty (charts)
    std::string description;
    std::optional<CellRect> rect;

    // Content extent: data dimensions, or the declared size for data-less
    // components. Resize rules are expressed against this.
    Size natural() const;
    bool has_data() const { return !data.empty(); }
};

using Relation = std::array<std::string, 2>;

// Canonical document. A "sheet" fresh from an author may lack types and
// locations; a "layout" has every rect set. Validators below distinguish
// the stages; the JSON schema is shared.
struct Sheet {
    std::vector<Component> components;
    std::optional<std::string> topic;
    std::vector<Relation> relations;
    std::optional<GridConfig> grid;

    const Component* find(const std::string& id) const;
};

// JSON I/O. load_sheet validates structure: rectangular data, unique
// non-empty ids, known types/topic, relation endpoints that exist and are
// not self-pairs, positive grid entries covering all locations.
Sheet load_sheet(const std::string& json_text);
Sheet load_sheet_file(const std::string& path);
std::string serialize_sheet(const Sheet& s);  // canonical: load(serialize(x)) round-trips byte-stably
void save_sheet_file(const Sheet& s, const std::string& path);

// Minimal bounding rectangle containing every placed component.
// Errors when the sheet is empty or any component lacks a location.
CellRect bounding_box(const Sheet& layout);

// Stage validators.
void require_processed(const Sheet& s);  // every component typed, topic set
void require_placed(const Sheet& s);     // every component has a rect

// Mapping of a component's data cells onto grid cells. A data cell may span
// several grid columns/rows when the component was resized (titles, charts)
// or keeps 1:1 rows from the top when a main table grew.
struct DataCellRegion {
    int data_row = 0;  // 0-based indices into Component::data
    int data_col = 0;
    CellRect cells;    // grid cells the content occupies
    const std::string* text = nullptr;
};

std::vector<DataCellRegion> data_cell_regions(const Component& c);

}  // namespace gridsheet
