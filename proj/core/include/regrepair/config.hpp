#pragma once

#include "regrepair/gateway.hpp"
#include "regrepair/prompting.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace regrepair {

/// One experiment = one (strategy, mode) over a filtered bug store.
struct ExperimentConfig {
    std::filesystem::path bug_store;
    std::vector<std::string> bug_filter;  // empty = every bug in the store
    ModelConfig model;
    CostModel cost_model;
    RepairStrategy strategy{RepairStrategy::Conversational};
    PromptMode mode{PromptMode::Baseline};
    int sampling_size{10};
    int max_conversation_length{5};
    std::chrono::seconds test_timeout{300};
    bool full_suite{true};
    int parallelism{1};
    int gateway_concurrency{2};

    void validate() const;
};

/// Loads the JSON config file. ${VAR} references in string values are
/// replaced from the environment, so secrets stay out of versioned configs.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::string interpolate_env(const std::string& value);

}  // namespace regrepair
