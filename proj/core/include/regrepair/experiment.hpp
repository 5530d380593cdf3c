#pragma once

#include "regrepair/config.hpp"
#include "regrepair/gateway.hpp"
#include "regrepair/repair.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace regrepair {

struct ExperimentResult {
    std::vector<RepairTrace> traces;
    Decimal total_cost;
    long plausible{0};
};

/// Gathers the prompt inputs for one bug from its snapshots: the buggy
/// function body and the witness failures observed on PreFixing, plus the
/// inducing-commit diff and message when mode = WithBic.
BugContext build_bug_context(const BugStore& store,
                             const BugManifest& manifest,
                             ProjectAdapter& adapter,
                             const std::filesystem::path& workdir,
                             PromptMode mode,
                             std::chrono::milliseconds timeout);

/// Runs the configured repair strategy over the filtered bugs and writes
/// trace-<bug>.json, messages-<bug>.jsonl, patches/<bug>/attempt-<n>.patch,
/// costs.csv and run-summary.json under out_dir. With a mock script the whole
/// pipeline is hermetic.
ExperimentResult run_repair_experiment(const ExperimentConfig& config,
                                       const std::optional<MockScript>& mock,
                                       const std::filesystem::path& out_dir);

}  // namespace regrepair
