#pragma once

#include "regrepair/adapter.hpp"
#include "regrepair/decimal.hpp"
#include "regrepair/gateway.hpp"
#include "regrepair/model.hpp"
#include "regrepair/prompting.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace regrepair {

struct PatchCandidate {
    enum class Extraction { FencedBlock, BareCode };

    std::string function_source;
    Extraction extraction{Extraction::FencedBlock};
    std::string raw_reply;
};

std::string_view extraction_name(PatchCandidate::Extraction extraction);

/// Takes the first fenced code block containing the target function's name;
/// with no fenced blocks present, falls back to a brace-balanced region
/// starting at the first line mentioning the name. nullopt means the reply
/// provided no code (the NoResponseCode feedback case).
std::optional<PatchCandidate> extract_patch(const std::string& reply,
                                            const FunctionLocator& target);

/// A workspace with the candidate function spliced over the locator's span.
/// The original file content is retained; rollback() (or destruction)
/// restores it byte-for-byte.
class PatchedWorkspace {
  public:
    PatchedWorkspace(Workspace ws,
                     std::filesystem::path file,
                     std::string original,
                     std::string patched);
    ~PatchedWorkspace();

    PatchedWorkspace(PatchedWorkspace&& other) noexcept;
    PatchedWorkspace& operator=(PatchedWorkspace&&) = delete;
    PatchedWorkspace(const PatchedWorkspace&) = delete;
    PatchedWorkspace& operator=(const PatchedWorkspace&) = delete;

    const Workspace& workspace() const { return ws_; }
    const std::filesystem::path& file() const { return file_; }
    const std::string& original_content() const { return original_; }
    const std::string& patched_content() const { return patched_; }

    void rollback();  // idempotent

  private:
    Workspace ws_;
    std::filesystem::path file_;
    std::string original_;
    std::string patched_;
    bool applied_{true};
};

/// Replaces exactly the locator's line span with the candidate source; every
/// other byte of the file is unchanged.
PatchedWorkspace apply_patch(const Workspace& ws,
                             const FunctionLocator& target,
                             const PatchCandidate& patch);

/// Compile, run the witness tests, then (optionally) the full suite.
/// Compile failure -> CompilationError; any timeout -> Timeout; any failing
/// test -> FunctionalError with the aggregated failure lines; otherwise
/// Plausible.
RepairVerdict validate_patch(const PatchedWorkspace& pws,
                             ProjectAdapter& adapter,
                             const std::vector<std::string>& witness_tests,
                             bool full_suite,
                             std::chrono::milliseconds timeout);

struct RepairCall {
    int attempt{1};
    int round{1};
    long prompt_tokens{0};
    long reply_tokens{0};
    RepairVerdict verdict;
};

struct TranscriptRecord {
    int attempt{1};
    int round{1};
    Role role{Role::User};
    std::string content;
};

struct RepairTrace {
    std::string bug_id;
    RepairStrategy strategy{RepairStrategy::ZeroShot};
    PromptMode mode{PromptMode::Baseline};
    std::vector<RepairCall> calls;
    std::optional<PatchCandidate> plausible_patch;  // empty = Exhausted
    Decimal total_cost;
    std::vector<TranscriptRecord> transcript;
    // (call index, unified diff) for every candidate the judge materialized.
    std::vector<std::pair<int, std::string>> patches;
};

struct RepairOptions {
    RepairStrategy strategy{RepairStrategy::Conversational};
    PromptMode mode{PromptMode::Baseline};
    int sampling_size{10};
    int max_conversation_length{5};
    bool full_suite{true};
    std::chrono::milliseconds test_timeout{300'000};
    CostModel cost_model;
    ModelConfig model;
};

struct JudgeResult {
    RepairVerdict verdict;
    std::string unified_diff;  // empty when the judge has no workspace
};

/// Produces a verdict for one candidate patch. The production implementation
/// applies the candidate to a PreFixing workspace and validates it; tests may
/// script verdict sequences directly.
class PatchJudge {
  public:
    virtual ~PatchJudge() = default;
    virtual JudgeResult judge(const PatchCandidate& candidate, int attempt, int round) = 0;
};

class WorkspacePatchJudge : public PatchJudge {
  public:
    WorkspacePatchJudge(Workspace ws,
                        FunctionLocator target,
                        ProjectAdapter& adapter,
                        std::vector<std::string> witness_tests,
                        bool full_suite,
                        std::chrono::milliseconds timeout);

    JudgeResult judge(const PatchCandidate& candidate, int attempt, int round) override;

  private:
    Workspace ws_;
    FunctionLocator target_;
    ProjectAdapter& adapter_;
    std::vector<std::string> witness_tests_;
    bool full_suite_;
    std::chrono::milliseconds timeout_;
};

/// Up to sampling_size independent calls with the same initial prompt,
/// stopping at the first plausible candidate.
RepairTrace repair_zero_shot(const std::string& bug_id,
                             const BugContext& ctx,
                             const FunctionLocator& target,
                             const RepairOptions& options,
                             ChatGateway& gateway,
                             PatchJudge& judge,
                             const PromptTemplates& templates = PromptTemplates::builtin());

/// Feedback-driven loop capped at sampling_size total calls, with
/// max_conversation_length rounds per conversation and restarts from the
/// initial prompt in between.
RepairTrace repair_conversational(const std::string& bug_id,
                                  const BugContext& ctx,
                                  const FunctionLocator& target,
                                  const RepairOptions& options,
                                  ChatGateway& gateway,
                                  PatchJudge& judge,
                                  const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace regrepair
