#pragma once

#include <string>

namespace gridsheet {

// Prompt templates for the four generation stages. The wording is part of
// the model contract: templates are byte-stable, tests pin them against
// golden files, and substitution is the only permitted transformation.
// "{name}" marks a placeholder.

// Relation extraction over the component list. Placeholder: {components}.
const std::string& preprocess_relations_template();

// Topic classification, typing and descriptions, sharing the relation
// prompt's skeleton. Placeholders: {topics}, {components}.
const std::string& preprocess_classify_template();

// Structure placement. Placeholder: {skeleton}.
const std::string& placement_template();

// The placement template's instruction block, reused verbatim as the
// revision prompt's general instructions.
const std::string& placement_instructions();

// Dual-reflection revision. Placeholders: {general_instructions},
// {instructions}, {layout}.
const std::string& revision_template();

// Content population. Placeholder: {contents}.
const std::string& population_template();

// The 13 topics, one "- " bullet per line.
std::string topics_block();

// Replaces "{name}", which must occur exactly once in `tmpl`. Single-pass:
// brace sequences inside `value` are copied verbatim, never expanded.
std::string substitute(const std::string& tmpl, const std::string& name, const std::string& value);

}  // namespace gridsheet
