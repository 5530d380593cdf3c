#pragma once

#include "regrepair/decimal.hpp"
#include "regrepair/prompting.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace regrepair {

struct ModelConfig {
    std::string model_name;
    double temperature{1.0};
    int samples_per_call{1};
    std::string endpoint;     // e.g. https://api.openai.com/v1/chat/completions
    std::string api_key_env;  // env var holding the bearer token; empty = no auth header
    std::chrono::milliseconds request_timeout{60'000};
    int max_retries{5};
    std::chrono::milliseconds retry_backoff{500};

    void validate() const;  // temperature >= 0, samples_per_call >= 1
};

struct ModelReply {
    std::string content;
    long input_tokens{0};
    long output_tokens{0};
    std::string finish_reason;
};

struct CostModel {
    Decimal input_price_per_1k;
    Decimal output_price_per_1k;

    void validate() const;  // prices >= 0, at most 9 decimal places
};

/// input/1000 * input_price + output/1000 * output_price, exact decimal.
Decimal estimate_cost(long input_tokens, long output_tokens, const CostModel& cost);

class ChatGateway {
  public:
    virtual ~ChatGateway() = default;
    virtual ModelReply complete(const Conversation& conv, const ModelConfig& cfg) = 0;
};

class RequestGate;

/// OpenAI-compatible chat-completions client. 429 and 5xx/transport errors are
/// retried with exponential backoff up to cfg.max_retries; 401/403 are fatal.
/// A semaphore shared by every thread using this instance caps concurrent
/// requests.
class HttpChatGateway : public ChatGateway {
  public:
    explicit HttpChatGateway(int max_concurrent_requests = 2);
    ModelReply complete(const Conversation& conv, const ModelConfig& cfg) override;

  private:
    int max_concurrent_;
    std::shared_ptr<RequestGate> gate_;
};

/// Whitespace-delimited token count; the deterministic usage model of the
/// mock gateway.
long whitespace_token_count(std::string_view text);

/// Ordered replies keyed by bug id; "*" is the fallback key. When a bug makes
/// more calls than its list holds, the last reply repeats.
struct MockScript {
    std::map<std::string, std::vector<std::string>> replies;

    static MockScript load(const std::filesystem::path& path);
    const std::vector<std::string>* find(const std::string& bug_id) const;
};

class MockChatGateway : public ChatGateway {
  public:
    MockChatGateway(MockScript script, std::string bug_id);
    ModelReply complete(const Conversation& conv, const ModelConfig& cfg) override;

    int calls_made() const { return call_index_; }

  private:
    MockScript script_;
    std::string bug_id_;
    int call_index_{0};
};

}  // namespace regrepair
