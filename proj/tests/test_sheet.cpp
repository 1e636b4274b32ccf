#include "doctest.h"

#include "gridsheet/sheet.hpp"
#include "gridsheet/synth.hpp"
#include "helpers.hpp"

using namespace gridsheet;

namespace {

const char* k_minimal = R"({
  "components": [
    {"id": "T1", "type": "title", "data": [["Quarterly Report"]], "location": "A1:D1"},
    {"id": "M1", "type": "main_table", "data": [["a", "b"], ["1", "2"]], "location": "A3:B4"}
  ],
  "topic": "Financial Management and Forecasting",
  "relations": [["M1", "T1"]]
})";

}  // namespace

TEST_CASE("load_sheet reads the canonical document") {
    const Sheet s = load_sheet(k_minimal);
    REQUIRE(s.components.size() == 2);
    CHECK(s.components[0].id == "T1");
    CHECK(s.components[0].type == ComponentType::title);
    CHECK(*s.components[0].rect == parse_range("A1:D1"));
    CHECK(s.components[1].data[1][1] == "2");
    CHECK(s.components[1].natural() == Size{2, 2});
    CHECK(*s.topic == "Financial Management and Forecasting");
    REQUIRE(s.relations.size() == 1);
    CHECK(s.relations[0][0] == "M1");
}

TEST_CASE("location accepts the two-string list form") {
    const Sheet s = load_sheet(R"({"components":[{"id":"a","data":[["x"]],"location":["C3","A1"]}]})");
    CHECK(*s.components[0].rect == parse_range("A1:C3"));
}

TEST_CASE("load_sheet validation failures") {
    CHECK_THROWS_AS(load_sheet("{"), ParseError);
    CHECK_THROWS_AS(load_sheet(R"({"components": "no"})"), ValidationError);
    SUBCASE("duplicate id") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x"]]},{"id":"a","data":[["y"]]}]})"),
                        ValidationError);
    }
    SUBCASE("ragged data") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x","y"],["z"]]}]})"), ValidationError);
    }
    SUBCASE("missing data and size") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a"}]})"), ValidationError);
    }
    SUBCASE("unknown type") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","type":"widget","data":[["x"]]}]})"), ValidationError);
    }
    SUBCASE("unknown topic") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x"]]}],"topic":"Knitting"})"),
                        ValidationError);
    }
    SUBCASE("relation to unknown id") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x"]]}],"relations":[["a","b"]]})"),
                        ValidationError);
    }
    SUBCASE("self relation") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x"]]}],"relations":[["a","a"]]})"),
                        ValidationError);
    }
    SUBCASE("non-positive grid entry") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x"]],"location":"A1:A1"}],)"
                                   R"("grid":{"col_widths":[0.0],"row_heights":[1.0]}})"),
                        ValidationError);
    }
    SUBCASE("grid not covering a location") {
        CHECK_THROWS_AS(load_sheet(R"({"components":[{"id":"a","data":[["x"]],"location":"B2:B2"}],)"
                                   R"("grid":{"col_widths":[10.0],"row_heights":[15.0]}})"),
                        ValidationError);
    }
}

TEST_CASE("serialize/load is a fixed point") {
    const Sheet once = load_sheet(k_minimal);
    const std::string first = serialize_sheet(once);
    const std::string second = serialize_sheet(load_sheet(first));
    CHECK(first == second);
}

TEST_CASE("serialization keeps grid and line breaks intact") {
    Sheet s = load_sheet(k_minimal);
    s.components[1].data[0][0] = "line one\nline two";
    s.grid = GridConfig{{10.0, 11.0, 12.0, 13.0}, {15.0, 15.0, 25.0, 25.0}};
    const Sheet back = load_sheet(serialize_sheet(s));
    CHECK(back.components[1].data[0][0] == "line one\nline two");
    REQUIRE(back.grid.has_value());
    CHECK(back.grid->col_widths == s.grid->col_widths);
    CHECK(serialize_sheet(back) == serialize_sheet(s));
}

TEST_CASE("bounding_box covers every component") {
    const Sheet s = testutil::layout_of({testutil::comp("a", ComponentType::title, "B2:D2"),
                                         testutil::comp("b", ComponentType::main_table, "C4:E7")});
    CHECK(bounding_box(s) == parse_range("B2:E7"));

    Sheet empty;
    CHECK_THROWS_AS(bounding_box(empty), ValidationError);

    Sheet unplaced;
    unplaced.components.push_back({});
    unplaced.components[0].id = "a";
    unplaced.components[0].data = {{"x"}};
    CHECK_THROWS_AS(bounding_box(unplaced), ValidationError);
}

TEST_CASE("bounding_box grows monotonically as components are added") {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        Sheet s = testutil::random_layout(rng, 12, 5);
        const CellRect before = bounding_box(s);
        Sheet bigger = s;
        bigger.components.push_back(testutil::comp("extra", ComponentType::meta_data, "A1:A1"));
        const CellRect after = bounding_box(bigger);
        CHECK(after.top <= before.top);
        CHECK(after.left <= before.left);
        CHECK(after.bottom >= before.bottom);
        CHECK(after.right >= before.right);
    }
}

TEST_CASE("data_cell_regions maps one-to-one when sizes match") {
    const auto c = testutil::comp("m", ComponentType::main_table, "B2:C3");
    auto with_data = c;
    with_data.data = {{"a", "b"}, {"c", "d"}};
    const auto regions = data_cell_regions(with_data);
    REQUIRE(regions.size() == 4);
    CHECK(regions[0].cells == parse_range("B2:B2"));
    CHECK(regions[3].cells == parse_range("C3:C3"));
    CHECK(*regions[3].text == "d");
}

TEST_CASE("data_cell_regions stretches resized titles across the rect") {
    Component t;
    t.id = "T1";
    t.type = ComponentType::title;
    t.data = {{"Big headline"}};
    t.rect = parse_range("A1:F2");
    const auto regions = data_cell_regions(t);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].cells == parse_range("A1:F2"));
}

TEST_CASE("data_cell_regions keeps grown main table rows anchored at the top") {
    Component m;
    m.id = "M1";
    m.type = ComponentType::main_table;
    m.data = {{"h1", "h2"}, {"1", "2"}};
    m.rect = parse_range("A1:B5");  // three empty grown rows below
    const auto regions = data_cell_regions(m);
    REQUIRE(regions.size() == 4);
    for (const auto& r : regions) {
        CHECK(r.cells.rows() == 1);
        CHECK(r.cells.top == m.rect->top + r.data_row);
    }
}

TEST_CASE("require_processed and require_placed gate the stages") {
    Sheet s = load_sheet(k_minimal);
    CHECK_NOTHROW(require_processed(s));
    CHECK_NOTHROW(require_placed(s));
    Sheet untyped = s;
    untyped.components[0].type.reset();
    CHECK_THROWS_AS(require_processed(untyped), ValidationError);
    Sheet untopic = s;
    untopic.topic.reset();
    CHECK_THROWS_AS(require_processed(untopic), ValidationError);
    Sheet unplaced = s;
    unplaced.components[1].rect.reset();
    CHECK_THROWS_AS(require_placed(unplaced), ValidationError);
}

TEST_CASE("synth_corpus is deterministic and well-formed") {
    const auto a = synth_corpus(42, 50);
    const auto b = synth_corpus(42, 50);
    REQUIRE(a.size() == 50);
    for (size_t i = 0; i < a.size(); ++i) CHECK(serialize_sheet(a[i]) == serialize_sheet(b[i]));

    const auto c = synth_corpus(43, 10);
    bool any_differs = false;
    for (size_t i = 0; i < c.size(); ++i)
        if (serialize_sheet(c[i]) != serialize_sheet(a[i])) any_differs = true;
    CHECK(any_differs);
}

TEST_CASE("every synthetic sheet has a title, a main table and a known topic") {
    for (const Sheet& s : synth_corpus(7, 50)) {
        int titles = 0, tables = 0;
        for (const auto& c : s.components) {
            REQUIRE(c.type.has_value());
            if (c.type == ComponentType::title) ++titles;
            if (c.type == ComponentType::main_table) ++tables;
        }
        CHECK(titles >= 1);
        CHECK(tables >= 1);
        REQUIRE(s.topic.has_value());
        CHECK(is_known_topic(*s.topic));
        // Serialized form must pass its own validation.
        CHECK_NOTHROW(load_sheet(serialize_sheet(s)));
    }
}

TEST_CASE("a profile forbidding charts yields none") {
    SynthProfile p;
    p.allow_charts = false;
    for (const Sheet& s : synth_corpus(11, 30, p))
        for (const auto& c : s.components) CHECK(c.type != ComponentType::chart);
}

TEST_CASE("topic vocabulary is the closed 13-entry set") {
    CHECK(topic_vocabulary().size() == 13);
    CHECK(is_known_topic("Project Scheduling"));
    CHECK(is_known_topic("To-do Lists and Calendars"));
    CHECK_FALSE(is_known_topic("project scheduling"));  // exact match only
    CHECK_FALSE(is_known_topic("Cooking"));
}
