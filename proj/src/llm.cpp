#include "gridsheet/llm.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "gridsheet/populator.hpp"
#include "gridsheet/prompts.hpp"
#include "gridsheet/sketch.hpp"
#include "json.hpp"

namespace gridsheet {

namespace fs = std::filesystem;
using nlohmann::json;

TokenUsage TokenLedger::total() const {
    TokenUsage sum;
    sum += pre_process;
    sum += structure;
    sum += revise;
    sum += content;
    return sum;
}

namespace {

std::string topic_slug(const std::string& topic) {
    std::string slug;
    for (char ch : topic) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (c == ' ' || c == '/')
            slug += '-';
        else
            slug += static_cast<char>(std::tolower(c));
    }
    return slug;
}

std::string squash_whitespace(const std::string& s) {
    std::string out;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
    return out;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::string base64_encode(const std::vector<uint8_t>& data) {
    static const char tbl[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out += tbl[v >> 18];
        out += tbl[(v >> 12) & 63];
        out += tbl[(v >> 6) & 63];
        out += tbl[v & 63];
    }
    if (i + 1 == data.size()) {
        uint32_t v = data[i] << 16;
        out += tbl[v >> 18];
        out += tbl[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == data.size()) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out += tbl[v >> 18];
        out += tbl[(v >> 12) & 63];
        out += tbl[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

namespace {

json parse_json_or_raise(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw ParseError(std::string("reply is not valid JSON: ") + e.what());
    }
}

// Sends once; a ParseError from `parse` earns one structured re-ask, after
// which a still-unparseable reply is a ProviderError. Validation failures
// are the model breaking the document contract and propagate immediately.
template <typename Fn>
auto ask(ChatProvider& provider, const ChatRequest& req, TokenUsage& spent, Fn&& parse)
    -> decltype(parse(std::string{})) {
    ChatResponse first = provider.complete(req);
    spent += first.usage;
    try {
        return parse(strip_markdown_fences(first.content));
    } catch (const ParseError& e) {
        ChatRequest retry = req;
        retry.structured_json = true;
        retry.messages.push_back({"assistant", first.content, {}});
        retry.messages.push_back({"user",
                                  std::string("The previous reply could not be parsed (") + e.what() +
                                      "). Reply again with only the corrected JSON document, no prose.",
                                  {}});
        ChatResponse second = provider.complete(retry);
        spent += second.usage;
        try {
            return parse(strip_markdown_fences(second.content));
        } catch (const ParseError& e2) {
            throw ProviderError(std::string("model reply unusable after structured re-ask: ") +
                                e2.what());
        }
    }
}

ChatRequest single_user_request(std::string prompt) {
    ChatRequest req;
    req.messages.push_back({"user", std::move(prompt), {}});
    return req;
}

// Takes only the locations from a placement-shaped reply; everything else
// (data, descriptions, relations) stays authoritative on the input side.
Sheet merge_locations(const Sheet& input, const Sheet& reply, const ResizePolicy& policy) {
    std::map<std::string, CellRect> placed;
    for (const auto& c : reply.components) {
        if (!input.find(c.id))
            throw ValidationError("reply places unknown component \"" + c.id + "\"");
        if (!c.rect) throw ValidationError("reply leaves component \"" + c.id + "\" unplaced");
        placed.emplace(c.id, *c.rect);  // reply ids are unique per load_sheet
    }
    Sheet out = input;
    out.grid.reset();  // re-placement invalidates any population-stage grid
    for (auto& c : out.components) {
        auto it = placed.find(c.id);
        if (it == placed.end())
            throw ValidationError("reply omits component \"" + c.id + "\"");
        validate_resize(c, it->second, policy);
        c.rect = it->second;
    }
    return out;
}

int choose_cell_px(const SketchDoc& doc) {
    int px = 40;
    while (px > 4) {
        auto [w, h] = raster_dimensions(doc, px);
        if (w <= 8192 && h <= 8192) break;
        px /= 2;
    }
    return std::max(px, 4);
}

bool looks_numeric(const std::string& s) {
    bool digit = false;
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isdigit(c)) {
            digit = true;
        } else if (std::isalpha(c)) {
            return false;
        }
    }
    return digit;
}

bool mentions_summary(const Component& c) {
    static const std::vector<std::string> keywords = {"total", "sum", "average", "summary",
                                                      "subtotal"};
    for (const auto& row : c.data) {
        for (const auto& cell : row) {
            std::string low;
            for (char ch : cell) low += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            for (const auto& k : keywords)
                if (low.find(k) != std::string::npos) return true;
        }
    }
    return false;
}

std::string describe(const Component& c) {
    Size n = c.natural();
    std::string what = c.type ? to_string(*c.type) : "component";
    return what + " \"" + c.id + "\" (" + std::to_string(n.rows) + "x" + std::to_string(n.cols) +
           ")";
}

std::vector<std::string> lowercase_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalpha(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            words.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

std::string guess_topic(const Sheet& sheet) {
    std::set<std::string> seen;
    for (const auto& c : sheet.components) {
        for (const auto& w : lowercase_words(c.id)) seen.insert(w);
        for (const auto& w : lowercase_words(c.description)) seen.insert(w);
        for (const auto& row : c.data)
            for (const auto& cell : row)
                for (const auto& w : lowercase_words(cell)) seen.insert(w);
    }
    static const std::set<std::string> stop = {"and", "of", "the", "to", "lists"};
    std::string best = "Data and Task Logs";
    int best_hits = 0;
    for (const auto& topic : topic_vocabulary()) {
        int hits = 0;
        for (const auto& w : lowercase_words(topic))
            if (!stop.count(w) && seen.count(w)) ++hits;
        if (hits > best_hits) {
            best_hits = hits;
            best = topic;
        }
    }
    return best;
}

}  // namespace

void ExemplarStore::add(const std::string& topic, std::string ref) {
    if (!is_known_topic(topic)) throw ValidationError("unknown exemplar topic \"" + topic + "\"");
    refs_[topic].push_back(std::move(ref));
}

void ExemplarStore::discover(const std::string& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("exemplar directory not found: " + dir);
    for (const auto& topic : topic_vocabulary()) {
        fs::path sub = fs::path(dir) / topic_slug(topic);
        if (!fs::is_directory(sub, ec)) continue;
        std::vector<std::string> found;
        for (const auto& entry : fs::directory_iterator(sub)) {
            if (entry.is_regular_file()) found.push_back(entry.path().string());
        }
        std::sort(found.begin(), found.end());
        for (auto& f : found) refs_[topic].push_back(std::move(f));
    }
}

std::optional<std::string> ExemplarStore::pick(const std::string& topic, uint64_t seed) const {
    auto it = refs_.find(topic);
    if (it == refs_.end() || it->second.empty()) return std::nullopt;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> d(0, it->second.size() - 1);
    return it->second[d(rng)];
}

size_t ExemplarStore::size() const {
    size_t n = 0;
    for (const auto& [topic, list] : refs_) n += list.size();
    return n;
}

std::string strip_markdown_fences(const std::string& text) {
    size_t b = text.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return text;
    size_t e = text.find_last_not_of(" \t\r\n");
    std::string t = text.substr(b, e - b + 1);
    if (t.size() < 6 || t.compare(0, 3, "```") != 0 || t.compare(t.size() - 3, 3, "```") != 0)
        return t;
    size_t nl = t.find('\n');
    if (nl == std::string::npos || nl + 1 > t.size() - 3) return t;
    std::string inner = t.substr(nl + 1, t.size() - 3 - (nl + 1));
    size_t ib = inner.find_first_not_of(" \t\r\n");
    if (ib == std::string::npos) return "";
    size_t ie = inner.find_last_not_of(" \t\r\n");
    return inner.substr(ib, ie - ib + 1);
}

Sheet llm_preprocess(const Sheet& sheet, ChatProvider& provider, TokenLedger* ledger) {
    if (sheet.components.empty())
        throw ValidationError("pre-processing requires at least one component");
    TokenUsage spent;

    std::string classify_prompt = substitute(preprocess_classify_template(), "topics", topics_block());
    classify_prompt = substitute(classify_prompt, "components", serialize_sheet(sheet));

    struct Entry {
        std::string type;
        std::string description;
    };
    struct Classification {
        std::string topic;
        std::map<std::string, Entry> by_id;
    };
    Classification cls = ask(provider, single_user_request(classify_prompt), spent,
                             [](const std::string& body) {
                                 json j = parse_json_or_raise(body);
                                 if (!j.is_object() || !j.contains("topic") || !j.contains("components"))
                                     throw ParseError(
                                         "classification reply must be an object with \"topic\" and "
                                         "\"components\"");
                                 if (!j["topic"].is_string() || !j["components"].is_array())
                                     throw ParseError("classification reply has mistyped fields");
                                 Classification out;
                                 out.topic = j["topic"].get<std::string>();
                                 for (const auto& item : j["components"]) {
                                     if (!item.is_object() || !item.contains("id") ||
                                         !item.contains("type") || !item.contains("description") ||
                                         !item["id"].is_string() || !item["type"].is_string() ||
                                         !item["description"].is_string())
                                         throw ParseError(
                                             "each classified component needs string id, type and "
                                             "description");
                                     std::string id = item["id"].get<std::string>();
                                     if (out.by_id.count(id))
                                         throw ValidationError("classification duplicates component \"" +
                                                               id + "\"");
                                     out.by_id[id] = {item["type"].get<std::string>(),
                                                      item["description"].get<std::string>()};
                                 }
                                 return out;
                             });

    if (!is_known_topic(cls.topic))
        throw ValidationError("classification picked unknown topic \"" + cls.topic + "\"");

    Sheet out = sheet;
    out.topic = cls.topic;
    for (auto& c : out.components) {
        auto it = cls.by_id.find(c.id);
        if (it == cls.by_id.end())
            throw ValidationError("classification omits component \"" + c.id + "\"");
        c.type = component_type_from_string(it->second.type);
        c.description = it->second.description;
        cls.by_id.erase(it);
    }
    if (!cls.by_id.empty())
        throw ValidationError("classification invents component \"" + cls.by_id.begin()->first +
                              "\"");

    std::string relation_prompt =
        substitute(preprocess_relations_template(), "components", serialize_sheet(sheet));
    std::vector<Relation> relations =
        ask(provider, single_user_request(relation_prompt), spent, [](const std::string& body) {
            json j = parse_json_or_raise(body);
            if (j.is_object() && j.contains("relations")) j = j["relations"];
            if (!j.is_array()) throw ParseError("relation reply must be a list of id pairs");
            std::vector<Relation> out;
            for (const auto& pair : j) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
                    !pair[1].is_string())
                    throw ParseError("each relation must be a 2-component list of ids");
                out.push_back({pair[0].get<std::string>(), pair[1].get<std::string>()});
            }
            return out;
        });

    for (const auto& r : relations) {
        for (const auto& id : r)
            if (!out.find(id))
                throw ValidationError("relation references unknown component \"" + id + "\"");
        if (r[0] == r[1])
            throw ValidationError("relation joins component \"" + r[0] + "\" with itself");
    }
    out.relations = std::move(relations);

    if (ledger) ledger->pre_process += spent;
    require_processed(out);
    return out;
}

Sheet heuristic_preprocess(const Sheet& sheet) {
    if (sheet.components.empty())
        throw ValidationError("pre-processing requires at least one component");
    Sheet out = sheet;

    for (auto& c : out.components)
        if (!c.type && !c.has_data()) c.type = ComponentType::chart;

    bool have_title = false;
    for (const auto& c : out.components) have_title |= c.type == ComponentType::title;
    if (!have_title) {
        for (auto& c : out.components) {
            // untyped components all carry data here; data-free ones became charts
            if (c.type || !c.has_data() || c.natural().rows != 1) continue;
            bool texty = false;
            for (const auto& cell : c.data[0]) texty |= !cell.empty() && !looks_numeric(cell);
            if (texty) {
                c.type = ComponentType::title;
                break;
            }
        }
    }

    bool have_main = false;
    for (const auto& c : out.components) have_main |= c.type == ComponentType::main_table;
    if (!have_main) {
        Component* largest = nullptr;
        long long best_area = 0;
        for (auto& c : out.components) {
            if (c.type) continue;
            long long area = static_cast<long long>(c.natural().rows) * c.natural().cols;
            if (area > best_area) {
                best_area = area;
                largest = &c;
            }
        }
        if (largest) largest->type = ComponentType::main_table;
    }

    for (auto& c : out.components) {
        if (c.type) continue;
        c.type = mentions_summary(c) ? ComponentType::summary_data : ComponentType::meta_data;
    }

    for (auto& c : out.components)
        if (c.description.empty()) c.description = describe(c);

    if (!out.topic || !is_known_topic(*out.topic)) out.topic = guess_topic(out);

    require_processed(out);
    return out;
}

Sheet llm_place(const Sheet& processed, ChatProvider& provider, TokenLedger* ledger,
                const ResizePolicy& policy, const std::string* exemplar_png) {
    require_processed(processed);
    if (exemplar_png && !provider.vision_capable())
        throw ProviderError("exemplar image requires a vision-capable provider");

    ChatRequest req = single_user_request(
        substitute(placement_template(), "skeleton", serialize_sheet(processed)));
    if (exemplar_png) req.messages[0].images.push_back(*exemplar_png);

    TokenUsage spent;
    Sheet reply =
        ask(provider, req, spent, [](const std::string& body) { return load_sheet(body); });
    Sheet out = merge_locations(processed, reply, policy);
    if (ledger) ledger->structure += spent;
    return out;
}

Sheet llm_revise(const Sheet& layout, const ReflectionPlan& plan, ChatProvider& provider,
                 TokenLedger* ledger, const ResizePolicy& policy) {
    require_placed(layout);
    if (plan.triggered.empty())
        throw ValidationError("revision requires a non-empty reflection plan");
    if (plan.attach_sketch && !provider.vision_capable())
        throw ProviderError("sketch attachment requires a vision-capable provider");

    std::string specific;
    if (plan.include_rules) {
        for (const auto& line : plan.instructions()) {
            if (!specific.empty()) specific += "\n";
            specific += line;
        }
    }
    std::string prompt =
        substitute(revision_template(), "general_instructions", placement_instructions());
    prompt = substitute(prompt, "instructions", specific);
    prompt = substitute(prompt, "layout", serialize_sheet(layout));

    ChatRequest req = single_user_request(std::move(prompt));
    if (plan.attach_sketch) {
        SketchDoc doc = render_sketch(layout);
        req.messages[0].images.push_back(base64_encode(rasterize(doc, choose_cell_px(doc))));
    }

    TokenUsage spent;
    Sheet reply =
        ask(provider, req, spent, [](const std::string& body) { return load_sheet(body); });
    Sheet out = merge_locations(layout, reply, policy);
    if (ledger) ledger->revise += spent;
    return out;
}

Sheet llm_populate(const Sheet& layout, ChatProvider& provider, TokenLedger* ledger) {
    require_placed(layout);

    ChatRequest req = single_user_request(
        substitute(population_template(), "contents", serialize_sheet(layout)));
    TokenUsage spent;
    Sheet reply =
        ask(provider, req, spent, [](const std::string& body) { return load_sheet(body); });

    if (!reply.grid) throw ValidationError("population reply must include the grid block");
    if (reply.components.size() != layout.components.size())
        throw ValidationError("population reply changed the component set");

    Sheet out = layout;
    for (auto& c : out.components) {
        const Component* r = reply.find(c.id);
        if (!r) throw ValidationError("population reply omits component \"" + c.id + "\"");
        if (!r->rect || !(*r->rect == *c.rect))
            throw ValidationError("population reply moved component \"" + c.id + "\"");
        if (r->type != c.type)
            throw ValidationError("population reply re-typed component \"" + c.id + "\"");
        if (r->data.size() != c.data.size())
            throw ValidationError("population reply reshaped component \"" + c.id + "\"");
        for (size_t i = 0; i < c.data.size(); ++i) {
            if (r->data[i].size() != c.data[i].size())
                throw ValidationError("population reply reshaped component \"" + c.id + "\"");
            for (size_t k = 0; k < c.data[i].size(); ++k)
                if (squash_whitespace(r->data[i][k]) != squash_whitespace(c.data[i][k]))
                    throw ValidationError("population reply rewrote content in component \"" + c.id +
                                          "\"");
        }
        c.data = r->data;
    }
    out.grid = reply.grid;
    if (ledger) ledger->content += spent;
    return out;
}

TranscriptingProvider::TranscriptingProvider(ChatProvider& inner, std::string path)
    : inner_(inner), path_(std::move(path)) {}

ChatResponse TranscriptingProvider::complete(const ChatRequest& request) {
    json line;
    line["provider"] = inner_.name();
    line["structured"] = request.structured_json;
    json messages = json::array();
    for (const auto& m : request.messages)
        messages.push_back(
            {{"role", m.role}, {"content", m.content}, {"images", m.images.size()}});
    line["messages"] = std::move(messages);

    auto append = [&](const json& entry) {
        std::lock_guard<std::mutex> lock(mu_);
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out.good()) throw IoError("cannot append transcript: " + path_);
        out << entry.dump() << "\n";
    };

    try {
        ChatResponse resp = inner_.complete(request);
        line["response"] = resp.content;
        line["usage"] = {{"prompt_tokens", resp.usage.prompt_tokens},
                         {"completion_tokens", resp.usage.completion_tokens}};
        append(line);
        return resp;
    } catch (const std::exception& e) {
        line["error"] = e.what();
        append(line);
        throw;
    }
}

std::shared_ptr<MockChatProvider> make_scripted_provider(uint64_t seed) {
    auto mock = std::make_shared<MockChatProvider>(true);
    mock->set_handler([seed](const ChatRequest& req) -> std::string {
        enum Stage { relations = 0, classify, place, revise, populate_stage, unknown = -1 };
        auto stage_of = [](const std::string& s) -> int {
            if (s.find("## Spreadsheet Skeleton Set with Contents") != std::string::npos)
                return populate_stage;
            if (s.find("## Spreadsheet layout") != std::string::npos) return revise;
            if (s.find("## Spreadsheet Skeleton Set") != std::string::npos) return place;
            if (s.find("## Topics") != std::string::npos) return classify;
            if (s.find("## Hints") != std::string::npos) return relations;
            return unknown;
        };
        int stage = unknown;
        const std::string* prompt = nullptr;
        for (const auto& m : req.messages) {
            int s = stage_of(m.content);
            if (s != unknown) {
                stage = s;
                prompt = &m.content;
            }
        }
        if (!prompt) throw ProviderError("scripted provider got an unrecognizable prompt");

        // The document under work is the prompt's trailing JSON block.
        auto embedded = [&]() -> std::string {
            size_t at = prompt->rfind("\n{");
            if (at == std::string::npos)
                throw ProviderError("scripted provider found no document in the prompt");
            return prompt->substr(at + 1);
        };
        // Same prompt, same answer: variety comes from the prompt bytes, so
        // concurrent use stays order-independent.
        uint64_t salt = seed ^ fnv1a(*prompt);

        switch (stage) {
            case relations:
                return "[]";
            case classify: {
                Sheet typed = heuristic_preprocess(load_sheet(embedded()));
                json comps = json::array();
                for (const auto& c : typed.components)
                    comps.push_back({{"id", c.id},
                                     {"type", to_string(*c.type)},
                                     {"description", c.description}});
                return json{{"topic", *typed.topic}, {"components", comps}}.dump(2);
            }
            case place:
            case revise: {
                PlacementConfig cfg;
                cfg.seed = salt;
                static const double factors[] = {1.0, 0.75, 1.3};
                cfg.width_factor = factors[salt % 3];
                return serialize_sheet(heuristic_place(load_sheet(embedded()), cfg));
            }
            case populate_stage:
                return serialize_sheet(populate(load_sheet(embedded())));
            default:
                throw ProviderError("scripted provider got an unrecognizable prompt");
        }
    });
    return mock;
}

}  // namespace gridsheet
