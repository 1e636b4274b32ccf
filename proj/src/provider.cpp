#include "gridsheet/provider.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "gridsheet/errors.hpp"
#include "json.hpp"

#include "httplib.h"

namespace gridsheet {

using nlohmann::json;

bool ChatRequest::has_images() const {
    for (const auto& m : messages)
        if (!m.images.empty()) return true;
    return false;
}

std::string serialize_provider_config(const ProviderConfig& cfg) {
    // Deliberately only the variable NAME; the token value never leaves the
    // process environment.
    json j = {
        {"endpoint", cfg.endpoint},
        {"auth_env", cfg.auth_env},
        {"model", cfg.model},
        {"vision", cfg.vision},
        {"retry", {{"max_attempts", cfg.retry.max_attempts}, {"backoff_ms", cfg.retry.backoff_ms}}},
        {"max_in_flight", cfg.max_in_flight},
    };
    return j.dump(2);
}

ProviderConfig parse_provider_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("provider config: ") + e.what());
    }
    ProviderConfig cfg;
    try {
        cfg.endpoint = j.at("endpoint").get<std::string>();
        if (j.contains("auth_env")) cfg.auth_env = j.at("auth_env").get<std::string>();
        if (j.contains("model")) cfg.model = j.at("model").get<std::string>();
        if (j.contains("vision")) cfg.vision = j.at("vision").get<bool>();
        if (j.contains("retry")) {
            const auto& r = j.at("retry");
            if (r.contains("max_attempts")) cfg.retry.max_attempts = r.at("max_attempts").get<int>();
            if (r.contains("backoff_ms")) cfg.retry.backoff_ms = r.at("backoff_ms").get<int>();
        }
        if (j.contains("max_in_flight")) cfg.max_in_flight = j.at("max_in_flight").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("provider config: ") + e.what());
    }
    if (cfg.endpoint.empty()) throw ValidationError("provider config: endpoint is required");
    if (cfg.retry.max_attempts < 1) throw ValidationError("provider config: max_attempts must be >= 1");
    if (cfg.max_in_flight < 1) throw ValidationError("provider config: max_in_flight must be >= 1");
    return cfg;
}

void MockChatProvider::enqueue(std::string response) {
    std::lock_guard<std::mutex> lock(mu_);
    scripted_.push_back(std::move(response));
}

void MockChatProvider::set_handler(Handler handler) {
    std::lock_guard<std::mutex> lock(mu_);
    handler_ = std::move(handler);
}

ChatResponse MockChatProvider::complete(const ChatRequest& request) {
    if (request.has_images() && !vision_)
        throw ProviderError("mock provider is not vision-capable but request carries images");
    std::string body;
    {
        std::lock_guard<std::mutex> lock(mu_);
        seen_.push_back(request);
        if (!scripted_.empty()) {
            body = std::move(scripted_.front());
            scripted_.pop_front();
        } else if (handler_) {
            body = handler_(request);
        } else {
            throw ProviderError("mock provider has no scripted response left");
        }
    }
    ChatResponse resp;
    resp.content = std::move(body);
    size_t prompt_bytes = 0;
    for (const auto& m : request.messages) prompt_bytes += m.content.size();
    resp.usage.prompt_tokens = static_cast<long long>((prompt_bytes + 3) / 4);
    resp.usage.completion_tokens = static_cast<long long>((resp.content.size() + 3) / 4);
    return resp;
}

std::vector<ChatRequest> MockChatProvider::requests() const {
    std::lock_guard<std::mutex> lock(mu_);
    return seen_;
}

size_t MockChatProvider::request_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return seen_.size();
}

std::string chat_request_body(const ChatRequest& request, const std::string& model) {
    json messages = json::array();
    for (const auto& m : request.messages) {
        if (m.images.empty()) {
            messages.push_back({{"role", m.role}, {"content", m.content}});
            continue;
        }
        json parts = json::array();
        parts.push_back({{"type", "text"}, {"text", m.content}});
        for (const auto& png64 : m.images) {
            parts.push_back({{"type", "image_url"},
                             {"image_url", {{"url", "data:image/png;base64," + png64}}}});
        }
        messages.push_back({{"role", m.role}, {"content", parts}});
    }
    json body = {
        {"model", model},
        {"messages", messages},
        {"max_tokens", request.max_tokens},
        {"top_p", request.top_p},
        {"temperature", request.temperature},
    };
    if (request.structured_json) body["response_format"] = {{"type", "json_object"}};
    return body.dump();
}

namespace {

std::atomic<long long> g_http_attempts{0};

struct ParsedEndpoint {
    std::string host_port;  // scheme://host[:port]
    std::string path;
};

ParsedEndpoint split_endpoint(const std::string& endpoint) {
    auto scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw ValidationError("provider endpoint must include a scheme: " + endpoint);
    auto path = endpoint.find('/', scheme + 3);
    if (path == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, path), endpoint.substr(path)};
}

ChatResponse parse_chat_response(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed completion payload: ") + e.what());
    }
    ChatResponse resp;
    try {
        const auto& choices = j.at("choices");
        if (!choices.is_array() || choices.empty())
            throw ProviderError("completion payload has no choices");
        resp.content = choices.at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed completion payload: ") + e.what());
    }
    if (j.contains("usage")) {
        const auto& u = j["usage"];
        if (u.contains("prompt_tokens")) resp.usage.prompt_tokens = u["prompt_tokens"].get<long long>();
        if (u.contains("completion_tokens"))
            resp.usage.completion_tokens = u["completion_tokens"].get<long long>();
    }
    return resp;
}

bool retryable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

HttpChatProvider::HttpChatProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {
    split_endpoint(cfg_.endpoint);  // fail fast on malformed endpoints
    if (cfg_.retry.max_attempts < 1) throw ValidationError("retry.max_attempts must be >= 1");
    if (cfg_.max_in_flight < 1) throw ValidationError("max_in_flight must be >= 1");
}

long long HttpChatProvider::attempted_requests() { return g_http_attempts.load(); }

ChatResponse HttpChatProvider::complete(const ChatRequest& request) {
    if (request.has_images() && !cfg_.vision)
        throw ProviderError("provider " + cfg_.model + " is not vision-capable but request carries images");

    const auto ep = split_endpoint(cfg_.endpoint);
    const std::string body = chat_request_body(request, cfg_.model);

    httplib::Headers headers;
    if (!cfg_.auth_env.empty()) {
        const char* token = std::getenv(cfg_.auth_env.c_str());
        if (token && *token) headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    std::unique_lock<std::mutex> lock(mu_);
    slot_.wait(lock, [&] { return in_flight_ < cfg_.max_in_flight; });
    ++in_flight_;
    lock.unlock();

    std::string failure = "no attempts made";
    ChatResponse out;
    bool ok = false;
    int backoff = cfg_.retry.backoff_ms;
    for (int attempt = 0; attempt < cfg_.retry.max_attempts && !ok; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
        g_http_attempts.fetch_add(1);
        httplib::Client client(ep.host_port);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(120, 0);
        auto res = client.Post(ep.path, headers, body, "application/json");
        if (!res) {
            failure = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            try {
                out = parse_chat_response(res->body);
                ok = true;
            } catch (const ProviderError& e) {
                failure = e.what();  // bad payload from a healthy endpoint: do not retry
            }
            break;
        }
        failure = "HTTP " + std::to_string(res->status) + ": " + res->body;
        if (!retryable_status(res->status)) break;
    }

    lock.lock();
    --in_flight_;
    lock.unlock();
    slot_.notify_one();

    if (!ok) throw ProviderError("chat completion failed after retries; last error: " + failure);
    return out;
}

}  // namespace gridsheet
