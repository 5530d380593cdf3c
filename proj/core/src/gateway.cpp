#include "regrepair/gateway.hpp"

#include "regrepair/errors.hpp"
#include "regrepair/serialize.hpp"

#include <httplib.h>

#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace regrepair {

void ModelConfig::validate() const {
    if (temperature < 0) raise(Errc::ConfigError, "temperature must be >= 0");
    if (samples_per_call < 1) raise(Errc::ConfigError, "samples_per_call must be >= 1");
    if (model_name.empty()) raise(Errc::ConfigError, "model_name is empty");
}

void CostModel::validate() const {
    if (input_price_per_1k < Decimal::zero() || output_price_per_1k < Decimal::zero())
        raise(Errc::ConfigError, "token prices must be >= 0");
    if (input_price_per_1k.pico() % 1000 != 0 || output_price_per_1k.pico() % 1000 != 0)
        raise(Errc::ConfigError, "token prices support at most 9 decimal places");
}

Decimal estimate_cost(long input_tokens, long output_tokens, const CostModel& cost) {
    if (input_tokens < 0 || output_tokens < 0)
        raise(Errc::InvalidArgument, "token counts must be >= 0");
    cost.validate();
    const std::int64_t in_per_token = cost.input_price_per_1k.pico() / 1000;
    const std::int64_t out_per_token = cost.output_price_per_1k.pico() / 1000;
    __int128 total = static_cast<__int128>(input_tokens) * in_per_token +
                     static_cast<__int128>(output_tokens) * out_per_token;
    if (total > INT64_MAX) raise(Errc::InvalidArgument, "cost overflows the decimal range");
    return Decimal::from_pico(static_cast<std::int64_t>(total));
}

long whitespace_token_count(std::string_view text) {
    long count = 0;
    bool in_token = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

// Runtime-capped semaphore; std::counting_semaphore fixes the cap at compile
// time.
class RequestGate {
  public:
    explicit RequestGate(int slots) : slots_(slots) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return slots_ > 0; });
        --slots_;
    }
    void release() {
        {
            std::lock_guard lock(mutex_);
            ++slots_;
        }
        cv_.notify_one();
    }

  private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int slots_;
};

namespace {

struct GateLease {
    RequestGate& gate;
    explicit GateLease(RequestGate& g) : gate(g) { gate.acquire(); }
    ~GateLease() { gate.release(); }
};

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
    std::size_t scheme = url.find("://");
    if (scheme == std::string::npos)
        raise(Errc::ConfigError, "endpoint must be an absolute URL: " + url);
    std::size_t slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, slash), url.substr(slash)};
}

Json conversation_to_request(const Conversation& conv, const ModelConfig& cfg) {
    Json messages = Json::array();
    for (const Message& message : conv.messages)
        messages.push_back({{"role", std::string(role_label(message.role))},
                            {"content", message.content}});
    Json request;
    request["model"] = cfg.model_name;
    request["messages"] = std::move(messages);
    request["temperature"] = cfg.temperature;
    request["n"] = cfg.samples_per_call;
    return request;
}

ModelReply parse_reply(const std::string& body) {
    Json json = Json::parse(body, nullptr, false);
    if (json.is_discarded()) raise(Errc::MalformedResponse, "response is not valid JSON");
    if (!json.contains("choices") || !json.at("choices").is_array() ||
        json.at("choices").empty())
        raise(Errc::MalformedResponse, "response has no choices");
    const Json& choice = json.at("choices").at(0);
    if (!choice.contains("message") || !choice.at("message").contains("content"))
        raise(Errc::MalformedResponse, "first choice has no message content");
    if (!json.contains("usage") || !json.at("usage").contains("prompt_tokens") ||
        !json.at("usage").contains("completion_tokens"))
        raise(Errc::MalformedResponse, "response has no usage block");
    ModelReply reply;
    reply.content = choice.at("message").at("content").get<std::string>();
    reply.input_tokens = json.at("usage").at("prompt_tokens").get<long>();
    reply.output_tokens = json.at("usage").at("completion_tokens").get<long>();
    reply.finish_reason = choice.value("finish_reason", "");
    return reply;
}

}  // namespace

HttpChatGateway::HttpChatGateway(int max_concurrent_requests)
    : max_concurrent_(max_concurrent_requests),
      gate_(std::make_shared<RequestGate>(max_concurrent_requests)) {}

ModelReply HttpChatGateway::complete(const Conversation& conv, const ModelConfig& cfg) {
    cfg.validate();
    Endpoint endpoint = parse_endpoint(cfg.endpoint);

    httplib::Headers headers;
    if (!cfg.api_key_env.empty()) {
        const char* key = std::getenv(cfg.api_key_env.c_str());
        if (key == nullptr || *key == '\0')
            raise(Errc::AuthFailure,
                  "environment variable " + cfg.api_key_env + " is not set");
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    const std::string body = conversation_to_request(conv, cfg).dump();

    GateLease lease(*gate_);
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            auto delay = cfg.retry_backoff * (1L << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
        httplib::Client client(endpoint.base);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(
            cfg.request_timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(
            cfg.request_timeout));
        auto res = client.Post(endpoint.path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return parse_reply(res->body);
        if (res->status == 401 || res->status == 403)
            raise(Errc::AuthFailure, "endpoint rejected the request with HTTP " +
                                         std::to_string(res->status));
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        raise(Errc::Transport, "unexpected HTTP status " + std::to_string(res->status));
    }
    if (last_error.rfind("HTTP 429", 0) == 0)
        raise(Errc::RateLimited, "rate limited after " + std::to_string(cfg.max_retries) +
                                     " retries");
    raise(Errc::Transport, last_error + " after " + std::to_string(cfg.max_retries) + " retries");
}

MockScript MockScript::load(const std::filesystem::path& path) {
    Json json = read_json_file(path);
    MockScript script;
    for (const auto& [bug_id, replies] : json.at("replies").items())
        script.replies[bug_id] = replies.get<std::vector<std::string>>();
    return script;
}

const std::vector<std::string>* MockScript::find(const std::string& bug_id) const {
    auto it = replies.find(bug_id);
    if (it != replies.end()) return &it->second;
    it = replies.find("*");
    if (it != replies.end()) return &it->second;
    return nullptr;
}

MockChatGateway::MockChatGateway(MockScript script, std::string bug_id)
    : script_(std::move(script)), bug_id_(std::move(bug_id)) {}

ModelReply MockChatGateway::complete(const Conversation& conv, const ModelConfig& cfg) {
    (void)cfg;
    const std::vector<std::string>* replies = script_.find(bug_id_);
    if (replies == nullptr || replies->empty())
        raise(Errc::ConfigError, "mock script has no replies for bug '" + bug_id_ + "'");
    std::size_t index = std::min(static_cast<std::size_t>(call_index_), replies->size() - 1);
    ++call_index_;

    ModelReply reply;
    reply.content = (*replies)[index];
    for (const Message& message : conv.messages)
        reply.input_tokens += whitespace_token_count(message.content);
    reply.output_tokens = whitespace_token_count(reply.content);
    reply.finish_reason = "stop";
    return reply;
}

}  // namespace regrepair
