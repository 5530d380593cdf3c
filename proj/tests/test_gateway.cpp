#include "regrepair/errors.hpp"
#include "regrepair/gateway.hpp"
#include "regrepair/serialize.hpp"

#include <doctest.h>
#include <httplib.h>

#include "testutil.hpp"

#include <atomic>
#include <random>
#include <thread>

using namespace regrepair;

namespace {

Conversation tiny_conversation() {
    Conversation conv;
    conv.messages.push_back({Role::System, "You are an Automated Program Repair Tool"});
    conv.messages.push_back({Role::User, "fix this function please"});
    return conv;
}

ModelConfig local_config(int port) {
    ModelConfig cfg;
    cfg.model_name = "test-model";
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    cfg.api_key_env = "";
    cfg.max_retries = 5;
    cfg.retry_backoff = std::chrono::milliseconds(1);
    cfg.request_timeout = std::chrono::seconds(5);
    return cfg;
}

struct StubServer {
    httplib::Server server;
    int port{0};
    std::thread thread;

    explicit StubServer(httplib::Server::Handler handler) {
        server.Post("/v1/chat/completions", std::move(handler));
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~StubServer() {
        server.stop();
        thread.join();
    }
};

std::string ok_body(const std::string& content) {
    Json body;
    body["choices"] = Json::array(
        {{{"message", {{"role", "assistant"}, {"content", content}}}, {"finish_reason", "stop"}}});
    body["usage"] = {{"prompt_tokens", 12}, {"completion_tokens", 34}};
    return body.dump();
}

}  // namespace

TEST_CASE("estimate_cost matches exact decimal arithmetic") {
    CostModel gpt4o{Decimal::parse("0.0025"), Decimal::parse("0.01")};
    CHECK(estimate_cost(1000, 1000, gpt4o).to_string() == "0.0125");
    CHECK(estimate_cost(0, 0, gpt4o).to_string() == "0");

    CostModel turbo{Decimal::parse("0.0005"), Decimal::parse("0.0015")};
    CHECK(estimate_cost(2500, 400, turbo).to_string() == "0.00185");

    CHECK_THROWS_AS(estimate_cost(-1, 0, gpt4o), Error);
}

TEST_CASE("estimate_cost is linear over componentwise sums") {
    CostModel model{Decimal::parse("0.003"), Decimal::parse("0.012")};
    std::mt19937 rng(99);
    std::uniform_int_distribution<long> tokens(0, 2'000'000);
    for (int i = 0; i < 300; ++i) {
        long a_in = tokens(rng), a_out = tokens(rng);
        long b_in = tokens(rng), b_out = tokens(rng);
        CHECK(estimate_cost(a_in + b_in, a_out + b_out, model) ==
              estimate_cost(a_in, a_out, model) + estimate_cost(b_in, b_out, model));
    }
}

TEST_CASE("whitespace tokenizer") {
    CHECK(whitespace_token_count("") == 0);
    CHECK(whitespace_token_count("one") == 1);
    CHECK(whitespace_token_count("  a b\n\tc  ") == 3);
}

TEST_CASE("mock gateway replays its script deterministically") {
    MockScript script;
    script.replies["bug-1"] = {"first reply", "second reply with more tokens"};
    script.replies["*"] = {"fallback"};

    MockChatGateway gateway(script, "bug-1");
    Conversation conv = tiny_conversation();
    ModelConfig cfg;
    cfg.model_name = "mock";

    ModelReply first = gateway.complete(conv, cfg);
    CHECK(first.content == "first reply");
    CHECK(first.input_tokens == whitespace_token_count(conv.messages[0].content) +
                                    whitespace_token_count(conv.messages[1].content));
    CHECK(first.output_tokens == 2);

    ModelReply second = gateway.complete(conv, cfg);
    CHECK(second.content == "second reply with more tokens");
    // Past the end of the list the last reply repeats.
    CHECK(gateway.complete(conv, cfg).content == "second reply with more tokens");

    MockChatGateway other(script, "unknown-bug");
    CHECK(other.complete(conv, cfg).content == "fallback");
}

TEST_CASE("http gateway retries 429 with backoff and then succeeds") {
    std::atomic<int> hits{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        int n = ++hits;
        if (n <= 2) {
            res.status = 429;
            res.set_content("slow down", "text/plain");
            return;
        }
        res.set_content(ok_body("patched"), "application/json");
    });

    HttpChatGateway gateway(2);
    ModelReply reply = gateway.complete(tiny_conversation(), local_config(stub.port));
    CHECK(reply.content == "patched");
    CHECK(reply.input_tokens == 12);
    CHECK(reply.output_tokens == 34);
    CHECK(hits.load() == 3);
}

TEST_CASE("http gateway sends the chat-completions shape") {
    Json seen;
    StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
        seen = Json::parse(req.body);
        res.set_content(ok_body("ok"), "application/json");
    });
    HttpChatGateway gateway;
    ModelConfig cfg = local_config(stub.port);
    cfg.temperature = 1.0;
    Conversation conv = tiny_conversation();
    gateway.complete(conv, cfg);

    CHECK(seen.at("model") == "test-model");
    CHECK(seen.at("temperature").get<double>() == doctest::Approx(1.0));
    CHECK(seen.at("n") == 1);
    REQUIRE(seen.at("messages").size() == 2);
    CHECK(seen.at("messages")[0].at("role") == "system");
    CHECK(seen.at("messages")[1].at("role") == "user");
}

TEST_CASE("http gateway error taxonomy") {
    SUBCASE("missing usage block is a malformed response") {
        StubServer stub([&](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"choices":[{"message":{"content":"x"}}]})", "application/json");
        });
        HttpChatGateway gateway;
        CHECK_THROWS_WITH_AS(gateway.complete(tiny_conversation(), local_config(stub.port)),
                             doctest::Contains("usage"), Error);
    }
    SUBCASE("401 is a fatal auth failure, no retries") {
        std::atomic<int> hits{0};
        StubServer stub([&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = 401;
        });
        HttpChatGateway gateway;
        try {
            gateway.complete(tiny_conversation(), local_config(stub.port));
            FAIL("expected AuthFailure");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::AuthFailure);
        }
        CHECK(hits.load() == 1);
    }
    SUBCASE("persistent 429 surfaces as RateLimited after max retries") {
        std::atomic<int> hits{0};
        StubServer stub([&](const httplib::Request&, httplib::Response& res) {
            ++hits;
            res.status = 429;
        });
        HttpChatGateway gateway;
        ModelConfig cfg = local_config(stub.port);
        cfg.max_retries = 3;
        try {
            gateway.complete(tiny_conversation(), cfg);
            FAIL("expected RateLimited");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::RateLimited);
        }
        CHECK(hits.load() == 4);  // initial call + 3 retries
    }
    SUBCASE("configured api key env var must exist") {
        StubServer stub([&](const httplib::Request&, httplib::Response& res) {
            res.set_content(ok_body("x"), "application/json");
        });
        HttpChatGateway gateway;
        ModelConfig cfg = local_config(stub.port);
        cfg.api_key_env = "REGREPAIR_TEST_KEY_THAT_DOES_NOT_EXIST";
        try {
            gateway.complete(tiny_conversation(), cfg);
            FAIL("expected AuthFailure");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::AuthFailure);
        }
    }
}

TEST_CASE("complete does not mutate the conversation") {
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        res.set_content(ok_body("x"), "application/json");
    });
    HttpChatGateway gateway;
    Conversation conv = tiny_conversation();
    Conversation before = conv;
    gateway.complete(conv, local_config(stub.port));
    CHECK(conv.messages == before.messages);
}
