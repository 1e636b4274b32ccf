#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "gridsheet/errors.hpp"
#include "gridsheet/provider.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace gridsheet;
using nlohmann::json;

namespace {

ChatRequest simple_request(const std::string& text) {
    ChatRequest req;
    req.messages.push_back({"user", text, {}});
    return req;
}

// In-process chat endpoint bound to an ephemeral loopback port.
struct TestServer {
    httplib::Server svr;
    int port = 0;
    std::thread th;

    void start() {
        port = svr.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        th = std::thread([this] { svr.listen_after_bind(); });
        svr.wait_until_ready();
    }
    ~TestServer() {
        svr.stop();
        if (th.joinable()) th.join();
    }

    ProviderConfig config() const {
        ProviderConfig cfg;
        cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
        cfg.auth_env = "GRIDSHEET_TEST_KEY";
        cfg.model = "unit-model";
        cfg.retry.max_attempts = 3;
        cfg.retry.backoff_ms = 1;
        return cfg;
    }
};

std::string ok_payload(const std::string& content, long long prompt = 7, long long completion = 5) {
    json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
              {"usage", {{"prompt_tokens", prompt}, {"completion_tokens", completion}}}};
    return j.dump();
}

}  // namespace

TEST_CASE("mock serves the queue first, then the handler, then fails") {
    MockChatProvider mock;
    mock.enqueue("first");
    mock.set_handler([](const ChatRequest&) { return std::string("from-handler"); });

    CHECK(mock.complete(simple_request("a")).content == "first");
    CHECK(mock.complete(simple_request("b")).content == "from-handler");

    MockChatProvider bare;
    CHECK_THROWS_AS(bare.complete(simple_request("c")), ProviderError);
    CHECK(bare.request_count() == 1);  // the failed call is still recorded
}

TEST_CASE("mock records requests and reports deterministic usage") {
    MockChatProvider mock;
    mock.enqueue("12345678");  // 8 bytes -> 2 completion tokens

    auto resp = mock.complete(simple_request("abcdefghi"));  // 9 bytes -> 3 prompt tokens
    CHECK(resp.usage.prompt_tokens == 3);
    CHECK(resp.usage.completion_tokens == 2);
    CHECK(resp.usage.total() == 5);

    auto seen = mock.requests();
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].messages.at(0).content == "abcdefghi");
}

TEST_CASE("text-only mock rejects image-bearing requests") {
    MockChatProvider blind(false);
    blind.enqueue("unused");
    auto req = simple_request("look");
    req.messages[0].images.push_back("aGVsbG8=");
    CHECK(req.has_images());
    CHECK_THROWS_AS(blind.complete(req), ProviderError);
}

TEST_CASE("provider config round-trips through JSON") {
    ProviderConfig cfg;
    cfg.endpoint = "http://example.invalid/v1/chat";
    cfg.auth_env = "SOME_KEY_VAR";
    cfg.model = "m-7";
    cfg.vision = true;
    cfg.retry.max_attempts = 5;
    cfg.retry.backoff_ms = 10;
    cfg.max_in_flight = 2;

    ProviderConfig back = parse_provider_config(serialize_provider_config(cfg));
    CHECK(back.endpoint == cfg.endpoint);
    CHECK(back.auth_env == cfg.auth_env);
    CHECK(back.model == cfg.model);
    CHECK(back.vision == cfg.vision);
    CHECK(back.retry.max_attempts == 5);
    CHECK(back.retry.backoff_ms == 10);
    CHECK(back.max_in_flight == 2);
}

TEST_CASE("serialized config names the key variable but never its value") {
    const char* sentinel = "sk-sentinel-do-not-leak-9f2";
    REQUIRE(setenv("GRIDSHEET_LEAK_PROBE", sentinel, 1) == 0);

    ProviderConfig cfg;
    cfg.endpoint = "http://example.invalid/v1/chat";
    cfg.auth_env = "GRIDSHEET_LEAK_PROBE";
    std::string dumped = serialize_provider_config(cfg);

    CHECK(dumped.find("GRIDSHEET_LEAK_PROBE") != std::string::npos);
    CHECK(dumped.find(sentinel) == std::string::npos);
    unsetenv("GRIDSHEET_LEAK_PROBE");
}

TEST_CASE("config parsing rejects broken input") {
    CHECK_THROWS_AS(parse_provider_config("not json"), ParseError);
    CHECK_THROWS_AS(parse_provider_config("{}"), ParseError);  // endpoint missing
    CHECK_THROWS_AS(parse_provider_config(R"({"endpoint":""})"), ValidationError);
    CHECK_THROWS_AS(
        parse_provider_config(R"({"endpoint":"http://x/y","retry":{"max_attempts":0}})"),
        ValidationError);
    CHECK_THROWS_AS(parse_provider_config(R"({"endpoint":"http://x/y","max_in_flight":0})"),
                    ValidationError);
}

TEST_CASE("request body carries sampling knobs and optional structure flag") {
    ChatRequest req = simple_request("hello");
    req.messages.insert(req.messages.begin(), {"system", "be terse", {}});

    json body = json::parse(chat_request_body(req, "unit-model"));
    CHECK(body["model"] == "unit-model");
    CHECK(body["max_tokens"] == 16384);
    CHECK(body["top_p"] == doctest::Approx(0.95));
    CHECK(body["temperature"] == doctest::Approx(0.7));
    CHECK(!body.contains("response_format"));
    REQUIRE(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][1]["content"] == "hello");

    req.structured_json = true;
    json structured = json::parse(chat_request_body(req, "unit-model"));
    CHECK(structured["response_format"]["type"] == "json_object");
}

TEST_CASE("image attachments become data-url content parts") {
    ChatRequest req = simple_request("what do you see");
    req.messages[0].images.push_back("QUJD");

    json body = json::parse(chat_request_body(req, "m"));
    const auto& content = body["messages"][0]["content"];
    REQUIRE(content.is_array());
    REQUIRE(content.size() == 2);
    CHECK(content[0]["type"] == "text");
    CHECK(content[0]["text"] == "what do you see");
    CHECK(content[1]["type"] == "image_url");
    CHECK(content[1]["image_url"]["url"] == "data:image/png;base64,QUJD");
}

TEST_CASE("http provider posts the payload and honors bearer auth") {
    TestServer server;
    std::string got_auth, got_body;
    server.svr.Post("/v1/chat/completions", [&](const httplib::Request& r, httplib::Response& res) {
        got_auth = r.get_header_value("Authorization");
        got_body = r.body;
        res.set_content(ok_payload("pong", 11, 4), "application/json");
    });
    server.start();

    REQUIRE(setenv("GRIDSHEET_TEST_KEY", "tok-123", 1) == 0);
    HttpChatProvider provider(server.config());
    auto resp = provider.complete(simple_request("ping"));
    unsetenv("GRIDSHEET_TEST_KEY");

    CHECK(resp.content == "pong");
    CHECK(resp.usage.prompt_tokens == 11);
    CHECK(resp.usage.completion_tokens == 4);
    CHECK(got_auth == "Bearer tok-123");
    json body = json::parse(got_body);
    CHECK(body["model"] == "unit-model");
    CHECK(body["messages"][0]["content"] == "ping");
}

TEST_CASE("http provider retries transient failures with backoff") {
    TestServer server;
    std::atomic<int> hits{0};
    server.svr.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        int n = ++hits;
        if (n == 1) {
            res.status = 500;
            res.set_content("boom", "text/plain");
        } else if (n == 2) {
            res.status = 429;
            res.set_content("slow down", "text/plain");
        } else {
            res.set_content(ok_payload("third time"), "application/json");
        }
    });
    server.start();

    long long before = HttpChatProvider::attempted_requests();
    HttpChatProvider provider(server.config());
    CHECK(provider.complete(simple_request("x")).content == "third time");
    CHECK(hits.load() == 3);
    CHECK(HttpChatProvider::attempted_requests() - before == 3);
}

TEST_CASE("http provider gives up after max_attempts") {
    TestServer server;
    std::atomic<int> hits{0};
    server.svr.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    server.start();

    ProviderConfig cfg = server.config();
    cfg.retry.max_attempts = 2;
    HttpChatProvider provider(cfg);
    CHECK_THROWS_AS(provider.complete(simple_request("x")), ProviderError);
    CHECK(hits.load() == 2);
}

TEST_CASE("http provider does not retry client mistakes") {
    TestServer server;
    std::atomic<int> hits{0};
    server.svr.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 400;
        res.set_content("bad request", "text/plain");
    });
    server.start();

    HttpChatProvider provider(server.config());
    CHECK_THROWS_AS(provider.complete(simple_request("x")), ProviderError);
    CHECK(hits.load() == 1);
}

TEST_CASE("http provider rejects malformed success payloads without retrying") {
    TestServer server;
    std::atomic<int> hits{0};
    server.svr.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.set_content("{\"choices\":[]}", "application/json");
    });
    server.start();

    HttpChatProvider provider(server.config());
    CHECK_THROWS_AS(provider.complete(simple_request("x")), ProviderError);
    CHECK(hits.load() == 1);
}

TEST_CASE("vision gating trips before any network activity") {
    ProviderConfig cfg;
    cfg.endpoint = "http://127.0.0.1:1/unreachable";  // would fail loudly if contacted
    cfg.vision = false;
    HttpChatProvider provider(cfg);

    auto req = simple_request("see this");
    req.messages[0].images.push_back("QUJD");

    long long before = HttpChatProvider::attempted_requests();
    CHECK_THROWS_AS(provider.complete(req), ProviderError);
    CHECK(HttpChatProvider::attempted_requests() == before);
}

TEST_CASE("endpoint parsing fails fast") {
    ProviderConfig cfg;
    cfg.endpoint = "127.0.0.1:8080/no-scheme";
    CHECK_THROWS_AS(HttpChatProvider{cfg}, ValidationError);
}

TEST_CASE("concurrent completions respect the in-flight cap") {
    TestServer server;
    std::atomic<int> live{0}, peak{0};
    server.svr.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        int now = ++live;
        int snap = peak.load();
        while (now > snap && !peak.compare_exchange_weak(snap, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        --live;
        res.set_content(ok_payload("ok"), "application/json");
    });
    server.start();

    ProviderConfig cfg = server.config();
    cfg.max_in_flight = 2;
    HttpChatProvider provider(cfg);

    std::vector<std::thread> callers;
    std::atomic<int> done{0};
    for (int i = 0; i < 6; ++i) {
        callers.emplace_back([&] {
            if (provider.complete(simple_request("x")).content == "ok") ++done;
        });
    }
    for (auto& t : callers) t.join();
    CHECK(done.load() == 6);
    CHECK(peak.load() <= 2);
}
