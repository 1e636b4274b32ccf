#include "gridsheet/prompts.hpp"

#include "gridsheet/errors.hpp"
#include "gridsheet/sheet.hpp"

namespace gridsheet {

const std::string& preprocess_relations_template() {
    static const std::string text =
        "## Task\n"
        "\n"
        "You will receive a list of spreadsheet components, each accompanied by comments, "
        "descriptions, and detailed data.\n"
        "Your task is to identify pairs of components that have a logical relationship.\n"
        "For example, if summary_table_1 summarizes data from main_table_1, you should extract and "
        "present this relationship as:\n"
        "(main_table_1, summary_table_1)\n"
        "\n"
        "## Hints\n"
        "\n"
        "(1) Relationships can be based on dependencies, references, or summarization within the "
        "spreadsheet structure.\n"
        "(2) If component_A describes, summarizes, or illustrates data derived from component_B, "
        "then A and B are related.\n"
        "(3) Organize the results in list of lists, where the inner list should be a 2-component "
        "list like [A, B].\n"
        "\n"
        "## Spreadsheet Components\n"
        "\n"
        "{components}\n";
    return text;
}

const std::string& preprocess_classify_template() {
    static const std::string text =
        "## Task\n"
        "\n"
        "You will receive a list of spreadsheet components, each accompanied by comments, "
        "descriptions, and detailed data.\n"
        "Your task is to classify the spreadsheet into one of the given topics, assign each "
        "component a type among title, main_table, meta_data, summary_data and chart, and write a "
        "one-line description for each component.\n"
        "\n"
        "## Topics\n"
        "\n"
        "{topics}\n"
        "\n"
        "## Spreadsheet Components\n"
        "\n"
        "{components}\n";
    return text;
}

const std::string& placement_instructions() {
    static const std::string text =
        "There are some hints to place the elements:\n"
        "\n"
        "- The location of elements should be provided via the \"location\" attribute, which "
        "should be a list of two strings indicating the left-top and bottom down corner of the "
        "element. Example: [\"A1\", \"C3\"].\n"
        "\n"
        "- The elements placed should align with each other. You can also maintain some symmetry.\n"
        "\t- Specially, maintain a type-aware alignment between element groups. For example, the "
        "metadata tables should be aligned with each other.\n"
        "\t- Specially, maintain a relation-aware alignment between elements. For example, the "
        "chart demonstrating certain main-table should be aligned with that main-table.\n"
        "\n"
        "- Avoid overlapping the elements.\n"
        "\n"
        "- The spreadsheet is a 2D grid, so don't place the elements wholly horizontally or "
        "vertically. Arrange them in a compound manner.\n"
        "\n"
        "- When placing the elements, you can leave some space as margins between them. But, "
        "avoid leaving too much space empty in the whole spreadsheet.\n"
        "\n"
        "- Place the elements considering the relationship between them, for example, the "
        "summary-table should be placed below the main-table.\n"
        "\n"
        "- You can change the size of the components following these rules:\n"
        "\t- Title: can be arbitrarily resized.\n"
        "\t- Main-table: you can add empty rows (or namely, changing the height of the table) to "
        "make it look good. But, the width should be the same as the given width.\n"
        "\t- Meta-data, summary data: not re-sizable.\n"
        "\n"
        "- The title should be placed at the top of the spreadsheet, spanning all active columns "
        "where there are components.\n"
        "\n"
        "- Do not duplicate the components, each type of components should be placed under the "
        "corresponding lists.";
    return text;
}

const std::string& placement_template() {
    static const std::string text =
        "## Task\n"
        "\n"
        "I will provide you with a spreadsheet skeleton with multiple elements including title, "
        "main-table, meta-data, summary-table, and charts in JSON.\n"
        "The task is to place the elements by setting their position in the spreadsheet in a good "
        "structure.\n"
        "\n"
        "## Instructions\n"
        "\n" +
        placement_instructions() +
        "\n"
        "\n"
        "## Spreadsheet Skeleton Set\n"
        "\n"
        "{skeleton}\n";
    return text;
}

const std::string& revision_template() {
    static const std::string text =
        "## Task\n"
        "\n"
        "I will provide you with a spreadsheet layout with multiple elements including title, "
        "main-table, meta-data, summary-table, and charts in JSON.\n"
        "Your task is to revise the structure following the instructions. I will first provide "
        "you with the general instructions,\n"
        "then is the specific instructions I want you to follow. You will need to revise the "
        "structure of the spreadsheet accordingly.\n"
        "\n"
        "## General Instructions\n"
        "\n"
        "{general_instructions}\n"
        "\n"
        "## Specific Instructions\n"
        "\n"
        "{instructions}\n"
        "\n"
        "## Spreadsheet layout\n"
        "\n"
        "{layout}\n";
    return text;
}

const std::string& population_template() {
    static const std::string text =
        "## Task\n"
        "\n"
        "I will provide you with a spreadsheet with multiple elements including title, "
        "main-table, meta-data, summary-table, and charts in JSON.\n"
        "These components include their location in the spreadsheet, as well as their content.\n"
        "Your task is to generate the proper line heights and column widths for the spreadsheet, "
        "as well as adding line breaks to the content.\n"
        "The fundamental goal is to (1) make the cells compatible with the content, and (2) make "
        "the spreadsheet visually appealing.\n"
        "\n"
        "## Instructions\n"
        "\n"
        "There are some hints:\n"
        "- Carefully consider the content of each cell and adjust the row height and column "
        "width accordingly.\n"
        "- For a cell with lengthy content, you can either wrap the text for a line break, or "
        "increase the column width.\n"
        "- Try assigning line heights and column widths and line breaks to make (1) the "
        "spreadsheet is balanced vertically and horizontally, and (2) the neither too compact "
        "nor too much empty spaces..\n"
        "- You may assume a default font setting of Calibri 11 and excel standard column width "
        "and row heights, where 1 character\n"
        "of text are compatible with 0.65 of column width.\n"
        "\n"
        "## Spreadsheet Skeleton Set with Contents\n"
        "\n"
        "{contents}\n";
    return text;
}

std::string topics_block() {
    std::string out;
    for (const auto& topic : topic_vocabulary()) {
        if (!out.empty()) out += "\n";
        out += "- " + topic;
    }
    return out;
}

std::string substitute(const std::string& tmpl, const std::string& name, const std::string& value) {
    const std::string marker = "{" + name + "}";
    const size_t first = tmpl.find(marker);
    if (first == std::string::npos)
        throw ValidationError("template lacks placeholder \"" + marker + "\"");
    if (tmpl.find(marker, first + marker.size()) != std::string::npos)
        throw ValidationError("placeholder \"" + marker + "\" occurs more than once");
    std::string out = tmpl;
    out.replace(first, marker.size(), value);
    return out;
}

}  // namespace gridsheet
