#include "gridsheet/synth.hpp"

#include <random>
#include <string>

namespace gridsheet {

namespace {

// Bounded draws via modulo keep output independent of the standard
// library's uniform_int_distribution implementation.
int draw(std::mt19937_64& rng, int lo, int hi) {
    if (hi < lo) return lo;
    return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

bool chance(std::mt19937_64& rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

const std::vector<std::string>& words() {
    static const std::vector<std::string> w = {
        "budget", "forecast", "region", "status", "owner",   "north",  "south",  "east",
        "west",   "review",   "draft",  "final",  "pending", "done",   "open",   "closed",
        "daily",  "weekly",   "march",  "april",  "client",  "vendor", "onsite", "remote",
        "high",   "medium",   "low",    "plan",   "actual",  "target", "unit",   "total",
    };
    return w;
}

std::string word(std::mt19937_64& rng) { return words()[static_cast<size_t>(draw(rng, 0, static_cast<int>(words().size()) - 1))]; }

std::string number(std::mt19937_64& rng) { return std::to_string(draw(rng, 1, 9999)); }

std::string sentence(std::mt19937_64& rng, int min_words, int max_words) {
    const int n = draw(rng, min_words, max_words);
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (i) s += ' ';
        s += word(rng);
    }
    return s;
}

CellGrid table_data(std::mt19937_64& rng, int rows, int cols, bool long_text) {
    CellGrid g(static_cast<size_t>(rows), std::vector<std::string>(static_cast<size_t>(cols)));
    for (int c = 0; c < cols; ++c) g[0][static_cast<size_t>(c)] = word(rng);
    for (int r = 1; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g[static_cast<size_t>(r)][static_cast<size_t>(c)] = c == 0 ? word(rng) : number(rng);
    if (long_text && rows > 1) {
        // One paragraph-length cell pushes the sheet into the regime where
        // wrapping beats single-line autofit.
        g[static_cast<size_t>(draw(rng, 1, rows - 1))][static_cast<size_t>(cols - 1)] = sentence(rng, 14, 26);
    }
    return g;
}

}  // namespace

std::vector<Sheet> synth_corpus(uint64_t seed, int n, const SynthProfile& profile) {
    if (n < 0) throw ValidationError("synth_corpus count must be non-negative");
    std::vector<Sheet> out;
    out.reserve(static_cast<size_t>(n));
    const auto& topics = topic_vocabulary();

    for (int i = 0; i < n; ++i) {
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(i) + 1);
        Sheet s;
        s.topic = topics[static_cast<size_t>(i) % topics.size()];
        const bool long_text = chance(rng, profile.long_text_prob);

        Component title;
        title.id = "T1";
        title.type = ComponentType::title;
        title.data = {{sentence(rng, 2, 4)}};
        title.description = "Sheet title";
        s.components.push_back(std::move(title));

        const int tables = std::max(1, draw(rng, profile.min_main_tables, profile.max_main_tables));
        std::vector<std::string> table_ids;
        for (int t = 0; t < tables; ++t) {
            Component c;
            c.id = "M" + std::to_string(t + 1);
            c.type = ComponentType::main_table;
            c.data = table_data(rng, draw(rng, 3, profile.max_table_rows), draw(rng, 2, profile.max_table_cols),
                                long_text && t == 0);
            c.description = "Main data table";
            table_ids.push_back(c.id);
            s.components.push_back(std::move(c));
        }

        const int metas = draw(rng, profile.min_meta, profile.max_meta);
        for (int m = 0; m < metas; ++m) {
            Component c;
            c.id = "MT" + std::to_string(m + 1);
            c.type = ComponentType::meta_data;
            c.data = table_data(rng, draw(rng, 2, 3), 2, false);
            c.description = "Key-value metadata block";
            s.components.push_back(std::move(c));
        }

        const int summaries = draw(rng, profile.min_summaries, profile.max_summaries);
        for (int k = 0; k < summaries; ++k) {
            Component c;
            c.id = "S" + std::to_string(k + 1);
            c.type = ComponentType::summary_data;
            c.data = table_data(rng, 2, draw(rng, 2, 4), false);
            c.description = "Summary of a main table";
            const std::string target = table_ids[static_cast<size_t>(draw(rng, 0, static_cast<int>(table_ids.size()) - 1))];
            if (chance(rng, profile.relation_prob)) s.relations.push_back({target, c.id});
            s.components.push_back(std::move(c));
        }

        if (profile.allow_charts) {
            int charts = 0;
            for (const std::string& target : table_ids) {
                if (!chance(rng, profile.chart_prob)) continue;
                Component c;
                c.id = "C" + std::to_string(++charts);
                c.type = ComponentType::chart;
                c.declared_size = Size{draw(rng, 4, 7), draw(rng, 3, 5)};
                c.description = "Chart of " + target;
                if (chance(rng, profile.relation_prob)) s.relations.push_back({target, c.id});
                s.components.push_back(std::move(c));
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace gridsheet
