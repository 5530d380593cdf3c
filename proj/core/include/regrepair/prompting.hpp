#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regrepair {

enum class Role { System, User, Assistant };
std::string_view role_label(Role role);  // "system", "user", "assistant"

struct Message {
    Role role{Role::User};
    std::string content;

    bool operator==(const Message&) const = default;
};

enum class PromptMode { Baseline, WithBic };
enum class RepairStrategy { ZeroShot, Conversational };

std::string_view prompt_mode_name(PromptMode mode);          // "baseline", "with-bic"
PromptMode prompt_mode_from_name(std::string_view name);
std::string_view strategy_name(RepairStrategy strategy);     // "zero-shot", "conversational"
RepairStrategy strategy_from_name(std::string_view name);

struct FailingTest {
    std::string test_name;
    std::string error_type;
    std::string error_message;
};

struct BugContext {
    std::string buggy_function_source;
    std::vector<FailingTest> failing_tests;
    std::optional<std::string> bic_diff;
    std::optional<std::string> bic_commit_message;
    bool function_changed_in_bic{false};
};

struct Conversation {
    std::vector<Message> messages;  // messages[0] is the single System message
    int attempt_index{1};
    int round_index{1};
    PromptMode mode{PromptMode::Baseline};
    RepairStrategy strategy{RepairStrategy::ZeroShot};

    const Message& initial_user() const { return messages.at(1); }
};

/// Outcome of judging one candidate patch. Plausible terminates the repair;
/// everything else maps onto one of the four feedback templates.
enum class VerdictKind { Plausible, CompilationError, FunctionalError, NoResponseCode, Timeout };
std::string_view verdict_kind_name(VerdictKind kind);
VerdictKind verdict_kind_from_name(std::string_view name);

struct RepairVerdict {
    VerdictKind kind{VerdictKind::Plausible};
    std::string message;

    static RepairVerdict plausible() { return {VerdictKind::Plausible, ""}; }
    static RepairVerdict compilation_error(std::string msg);
    static RepairVerdict functional_error(std::string msg);
    static RepairVerdict no_response_code() { return {VerdictKind::NoResponseCode, ""}; }
    static RepairVerdict timeout() { return {VerdictKind::Timeout, ""}; }

    bool is_plausible() const { return kind == VerdictKind::Plausible; }

    bool operator==(const RepairVerdict&) const = default;
};

/// The versioned prompt text resources. The builtin set is frozen in code and
/// mirrored byte-for-byte by the files under core/resources/templates/.
struct PromptTemplates {
    std::string system;
    std::string baseline;
    std::string bic_changed;
    std::string bic_unchanged;
    std::string feedback_compile;
    std::string feedback_functional;
    std::string feedback_nocode;
    std::string feedback_timeout;

    static const PromptTemplates& builtin();
    static PromptTemplates load_dir(const std::filesystem::path& dir);
};

/// Renders the numbered failing-test list used inside the user prompt.
std::string render_failing_tests(const std::vector<FailingTest>& tests);

Conversation build_initial_prompt(const BugContext& ctx,
                                  PromptMode mode,
                                  RepairStrategy strategy,
                                  const PromptTemplates& templates = PromptTemplates::builtin());

/// The canned feedback message for a non-plausible verdict; role = User.
Message build_feedback(const RepairVerdict& verdict,
                       const PromptTemplates& templates = PromptTemplates::builtin());

struct ConversationLimits {
    int max_conversation_length{5};
    int sampling_size{10};
};

struct NextAction {
    enum class Kind { Done, Continue, Restart };
    Kind kind{Kind::Done};
    std::optional<Conversation> conversation;
};

/// Advances a conversational repair loop after one model reply has been
/// judged. Plausible -> Done. Otherwise the reply and its feedback message are
/// appended and the round advances, unless the conversation is at the maximum
/// length, in which case a fresh conversation (initial prompt only) with
/// attempt_index + 1 is returned. Throws BudgetExhausted once the sampling
/// budget is spent.
NextAction advance(const Conversation& conv,
                   const Message& reply,
                   const RepairVerdict& verdict,
                   const ConversationLimits& limits,
                   const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace regrepair
