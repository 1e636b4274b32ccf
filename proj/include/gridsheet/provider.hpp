#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

namespace gridsheet {

// One chat turn. Images are base64 PNG payloads attached to the turn;
// they are only legal against vision-capable providers.
struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
    std::vector<std::string> images;
};

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;

    long long total() const { return prompt_tokens + completion_tokens; }
    TokenUsage& operator+=(const TokenUsage& o) {
        prompt_tokens += o.prompt_tokens;
        completion_tokens += o.completion_tokens;
        return *this;
    }
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    int max_tokens = 16384;
    double top_p = 0.95;
    double temperature = 0.7;
    bool structured_json = false;  // ask for a bare JSON object response

    bool has_images() const;
};

struct ChatResponse {
    std::string content;
    TokenUsage usage;
};

class ChatProvider {
  public:
    virtual ~ChatProvider() = default;

    // Completes one request. Throws ProviderError on failure.
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual bool vision_capable() const = 0;
    virtual std::string name() const = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_ms = 200;  // doubled after every failed attempt
};

// Where and how to reach a chat-completion endpoint. The bearer token is
// read from the environment variable named by auth_env at request time and
// is never stored or serialized; configs round-trip through JSON without
// it by construction.
struct ProviderConfig {
    std::string endpoint;  // e.g. "http://127.0.0.1:8089/v1/chat/completions"
    std::string auth_env = "GRIDSHEET_API_KEY";
    std::string model = "grid-layout-chat";
    bool vision = false;
    RetryPolicy retry;
    int max_in_flight = 4;
};

std::string serialize_provider_config(const ProviderConfig& cfg);
ProviderConfig parse_provider_config(const std::string& json_text);

// Scriptable in-memory provider: queued responses are served first, then a
// handler if set. Records every request for inspection. Thread-safe.
class MockChatProvider : public ChatProvider {
  public:
    using Handler = std::function<std::string(const ChatRequest&)>;

    explicit MockChatProvider(bool vision = true) : vision_(vision) {}

    void enqueue(std::string response);
    void set_handler(Handler handler);

    ChatResponse complete(const ChatRequest& request) override;
    bool vision_capable() const override { return vision_; }
    std::string name() const override { return "mock"; }

    std::vector<ChatRequest> requests() const;
    size_t request_count() const;

  private:
    bool vision_;
    mutable std::mutex mu_;
    std::deque<std::string> scripted_;
    Handler handler_;
    std::vector<ChatRequest> seen_;
};

// Generic JSON chat-completion HTTP client with bearer auth, bounded
// retries with exponential backoff on 429/5xx/transport errors, and a
// max-in-flight cap. Every attempted HTTP request increments a process
// wide counter so offline runs can prove they made none.
class HttpChatProvider : public ChatProvider {
  public:
    explicit HttpChatProvider(ProviderConfig cfg);

    ChatResponse complete(const ChatRequest& request) override;
    bool vision_capable() const override { return cfg_.vision; }
    std::string name() const override { return "http:" + cfg_.model; }

    static long long attempted_requests();

  private:
    ProviderConfig cfg_;
    std::mutex mu_;
    std::condition_variable slot_;
    int in_flight_ = 0;
};

// Serialized request body for the HTTP contract (also used by tests).
std::string chat_request_body(const ChatRequest& request, const std::string& model);

}  // namespace gridsheet
