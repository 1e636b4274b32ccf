#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gridsheet/placer.hpp"
#include "gridsheet/provider.hpp"
#include "gridsheet/reflection.hpp"
#include "gridsheet/sheet.hpp"

namespace gridsheet {

// Token spend broken down by pipeline stage.
struct TokenLedger {
    TokenUsage pre_process;
    TokenUsage structure;
    TokenUsage revise;
    TokenUsage content;

    TokenUsage total() const;
};

// Exemplar image references grouped by topic. Lookup is seeded so the same
// run always studies the same exemplar.
class ExemplarStore {
  public:
    void add(const std::string& topic, std::string ref);

    // Scans dir for one subdirectory per topic (lowercased, spaces and
    // slashes turned into '-') and registers every regular file inside.
    void discover(const std::string& dir);

    std::optional<std::string> pick(const std::string& topic, uint64_t seed) const;
    size_t size() const;

  private:
    std::map<std::string, std::vector<std::string>> refs_;
};

// Drops a leading/trailing ``` fence (optionally tagged, e.g. ```json)
// around an otherwise-bare payload. Non-fenced text passes through.
std::string strip_markdown_fences(const std::string& text);

// Standard base64 with padding, for image attachments.
std::string base64_encode(const std::vector<uint8_t>& data);

// Stage drivers. Each assembles its prompt from the byte-stable template,
// sends it, and merges the validated reply onto the input document. A reply
// that is not parseable JSON earns exactly one structured re-ask and then a
// ProviderError; a parseable reply that violates the document contract
// (unknown ids, duplicated components, illegal resize, missing grid, ...)
// is rejected with a ValidationError.

// Topic classification + typing + descriptions, then relation extraction.
Sheet llm_preprocess(const Sheet& sheet, ChatProvider& provider, TokenLedger* ledger = nullptr);

// Offline typing fallback: shape rules pick the title (first single-row
// all-text component) and main table (largest remaining data area), data
// free components become charts, summary keywords mark summary blocks and
// the rest is metadata. Topic by vocabulary overlap; relations stay empty.
Sheet heuristic_preprocess(const Sheet& sheet);

// Structure placement. The optional exemplar is a base64 PNG attached to
// the request (vision-capable providers only).
Sheet llm_place(const Sheet& processed, ChatProvider& provider, TokenLedger* ledger = nullptr,
                const ResizePolicy& policy = {}, const std::string* exemplar_png = nullptr);

// Dual-reflection revision for a non-empty plan. The rendered sketch is
// attached when the plan asks for it; that requires a vision-capable
// provider and is checked before any network activity.
Sheet llm_revise(const Sheet& layout, const ReflectionPlan& plan, ChatProvider& provider,
                 TokenLedger* ledger = nullptr, const ResizePolicy& policy = {});

// Content population: line breaks plus a full width/height grid block.
Sheet llm_populate(const Sheet& layout, ChatProvider& provider, TokenLedger* ledger = nullptr);

// Audit decorator: appends one JSON line per exchange (messages, image
// counts, reply, token usage, errors) to `path`. Auth material never
// reaches it because requests carry none.
class TranscriptingProvider : public ChatProvider {
  public:
    TranscriptingProvider(ChatProvider& inner, std::string path);

    ChatResponse complete(const ChatRequest& request) override;
    bool vision_capable() const override { return inner_.vision_capable(); }
    std::string name() const override { return inner_.name(); }

  private:
    ChatProvider& inner_;
    std::string path_;
    std::mutex mu_;
};

// Deterministic offline provider: recognizes which stage a prompt belongs
// to and answers with locally computed results (heuristic typing and
// placement, deterministic population). Pure given (seed, request).
std::shared_ptr<MockChatProvider> make_scripted_provider(uint64_t seed);

}  // namespace gridsheet
