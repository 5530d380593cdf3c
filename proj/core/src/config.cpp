#include "regrepair/config.hpp"

#include "regrepair/errors.hpp"
#include "regrepair/serialize.hpp"

#include <cstdlib>

namespace regrepair {

void ExperimentConfig::validate() const {
    if (bug_store.empty()) raise(Errc::ConfigError, "bug_store path is missing");
    if (sampling_size < 1) raise(Errc::ConfigError, "sampling_size must be >= 1");
    if (max_conversation_length < 1)
        raise(Errc::ConfigError, "max_conversation_length must be >= 1");
    if (parallelism < 1) raise(Errc::ConfigError, "parallelism must be >= 1");
    if (gateway_concurrency < 1) raise(Errc::ConfigError, "gateway_concurrency must be >= 1");
    model.validate();
    cost_model.validate();
}

std::string interpolate_env(const std::string& value) {
    std::string out;
    std::size_t pos = 0;
    while (pos < value.size()) {
        std::size_t open = value.find("${", pos);
        if (open == std::string::npos) {
            out += value.substr(pos);
            break;
        }
        std::size_t close = value.find('}', open + 2);
        if (close == std::string::npos) {
            out += value.substr(pos);
            break;
        }
        out += value.substr(pos, open - pos);
        std::string name = value.substr(open + 2, close - open - 2);
        const char* env = std::getenv(name.c_str());
        if (env != nullptr) out += env;
        pos = close + 1;
    }
    return out;
}

namespace {

std::string get_interpolated(const Json& json, const char* key, const std::string& fallback) {
    if (!json.contains(key)) return fallback;
    return interpolate_env(json.at(key).get<std::string>());
}

Decimal price_from_json(const Json& value) {
    if (value.is_string()) return Decimal::parse(value.get<std::string>());
    if (value.is_number()) return Decimal::parse(value.dump());
    raise(Errc::ConfigError, "token prices must be decimal strings or numbers");
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    Json json = read_json_file(path);
    ExperimentConfig config;

    config.bug_store = get_interpolated(json, "bug_store", "");
    if (json.contains("bug_filter"))
        config.bug_filter = json.at("bug_filter").get<std::vector<std::string>>();

    if (json.contains("model")) {
        const Json& model = json.at("model");
        config.model.model_name = get_interpolated(model, "model_name", "");
        config.model.temperature = model.value("temperature", 1.0);
        config.model.samples_per_call = model.value("samples_per_call", 1);
        config.model.endpoint = get_interpolated(model, "endpoint", "");
        config.model.api_key_env = model.value("api_key_env", "");
        config.model.request_timeout =
            std::chrono::seconds(model.value("request_timeout_s", 60));
        config.model.max_retries = model.value("max_retries", 5);
        config.model.retry_backoff =
            std::chrono::milliseconds(model.value("retry_backoff_ms", 500));
    }
    if (json.contains("cost_model")) {
        const Json& cost = json.at("cost_model");
        config.cost_model.input_price_per_1k = price_from_json(cost.at("input_price_per_1k"));
        config.cost_model.output_price_per_1k = price_from_json(cost.at("output_price_per_1k"));
    }
    if (json.contains("strategy"))
        config.strategy = strategy_from_name(json.at("strategy").get<std::string>());
    if (json.contains("mode")) config.mode = prompt_mode_from_name(json.at("mode").get<std::string>());
    config.sampling_size = json.value("sampling_size", 10);
    config.max_conversation_length = json.value("max_conversation_length", 5);
    config.test_timeout = std::chrono::seconds(json.value("test_timeout_s", 300));
    config.full_suite = json.value("full_suite", true);
    config.parallelism = json.value("parallelism", 1);
    config.gateway_concurrency = json.value("gateway_concurrency", 2);

    config.validate();
    return config;
}

}  // namespace regrepair
