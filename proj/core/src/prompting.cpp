#include "regrepair/prompting.hpp"

#include "regrepair/errors.hpp"
#include "regrepair/io.hpp"

#include <sstream>

namespace regrepair {

std::string_view role_label(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "?";
}

std::string_view prompt_mode_name(PromptMode mode) {
    return mode == PromptMode::Baseline ? "baseline" : "with-bic";
}

PromptMode prompt_mode_from_name(std::string_view name) {
    if (name == "baseline") return PromptMode::Baseline;
    if (name == "with-bic") return PromptMode::WithBic;
    raise(Errc::InvalidArgument, "unknown prompt mode '" + std::string(name) + "'");
}

std::string_view strategy_name(RepairStrategy strategy) {
    return strategy == RepairStrategy::ZeroShot ? "zero-shot" : "conversational";
}

RepairStrategy strategy_from_name(std::string_view name) {
    if (name == "zero-shot") return RepairStrategy::ZeroShot;
    if (name == "conversational") return RepairStrategy::Conversational;
    raise(Errc::InvalidArgument, "unknown repair strategy '" + std::string(name) + "'");
}

std::string_view verdict_kind_name(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Plausible: return "plausible";
        case VerdictKind::CompilationError: return "compilation_error";
        case VerdictKind::FunctionalError: return "functional_error";
        case VerdictKind::NoResponseCode: return "no_response_code";
        case VerdictKind::Timeout: return "timeout";
    }
    return "?";
}

VerdictKind verdict_kind_from_name(std::string_view name) {
    if (name == "plausible") return VerdictKind::Plausible;
    if (name == "compilation_error") return VerdictKind::CompilationError;
    if (name == "functional_error") return VerdictKind::FunctionalError;
    if (name == "no_response_code") return VerdictKind::NoResponseCode;
    if (name == "timeout") return VerdictKind::Timeout;
    raise(Errc::InvalidArgument, "unknown verdict kind '" + std::string(name) + "'");
}

RepairVerdict RepairVerdict::compilation_error(std::string msg) {
    if (msg.empty()) raise(Errc::InvalidArgument, "CompilationError requires a message");
    return {VerdictKind::CompilationError, std::move(msg)};
}

RepairVerdict RepairVerdict::functional_error(std::string msg) {
    if (msg.empty()) raise(Errc::InvalidArgument, "FunctionalError requires a message");
    return {VerdictKind::FunctionalError, std::move(msg)};
}

namespace {

// Frozen prompt texts. The files under core/resources/templates/ mirror these
// byte-for-byte (modulo the trailing newline text files carry); a test keeps
// them in sync.

constexpr const char* kSystem = "You are an Automated Program Repair Tool";

constexpr const char* kBaseline =
    R"TPL(The buggy function is:
```
{buggy_function}
```

The function fails on the following test cases:
{failing_tests}

Let's think step by step to fix the bug.
Please provide a correct function.)TPL";

constexpr const char* kBicChanged =
    R"TPL(The buggy function is:
```
{buggy_function}
```

The function fails on the following test cases:
{failing_tests}

The regression-inducing commit modified the buggy function with the following changes:
```
{bic_diff}
```

The commit message of the regression-inducing commit is:
{bic_commit_message}

Let's think step by step to identify the root cause from the regression-inducing change information in order to fix the regression bug.
Then, provide a correct version of the function.)TPL";

constexpr const char* kBicUnchanged =
    R"TPL(The buggy function is:
```
{buggy_function}
```

The function fails on the following test cases:
{failing_tests}

The buggy function was not modified by the regression-inducing commit; the fault is introduced by other changes in that commit.

The commit message of the regression-inducing commit is:
{bic_commit_message}

Let's think step by step to identify the root cause from the regression-inducing change information in order to fix the regression bug.
Then, provide a correct version of the function.)TPL";

constexpr const char* kFeedbackCompile =
    R"TPL(The fixed version is not compilable. The code has the following compilation error:
{error_message}
Please provide the correct function along with any required imports.)TPL";

constexpr const char* kFeedbackFunctional =
    R"TPL(The fixed version is still not correct. The code fails on the following test cases with the following error messages:
{error_message}
Please provide the correct function again.)TPL";

constexpr const char* kFeedbackNoCode =
    R"TPL(The response does not provide the code function.
Please provide the correct function again.)TPL";

constexpr const char* kFeedbackTimeout =
    R"TPL(The fixed version is still not correct and ran out of time.
Please provide the correct function again.)TPL";

std::string substitute(std::string text, std::string_view placeholder, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

std::string load_template(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

}  // namespace

const PromptTemplates& PromptTemplates::builtin() {
    static const PromptTemplates templates{
        kSystem,         kBaseline,         kBicChanged,    kBicUnchanged,
        kFeedbackCompile, kFeedbackFunctional, kFeedbackNoCode, kFeedbackTimeout,
    };
    return templates;
}

PromptTemplates PromptTemplates::load_dir(const std::filesystem::path& dir) {
    PromptTemplates templates;
    templates.system = load_template(dir / "prompt_system.txt");
    templates.baseline = load_template(dir / "prompt_baseline.txt");
    templates.bic_changed = load_template(dir / "prompt_bic_changed.txt");
    templates.bic_unchanged = load_template(dir / "prompt_bic_unchanged.txt");
    templates.feedback_compile = load_template(dir / "feedback_compile.txt");
    templates.feedback_functional = load_template(dir / "feedback_functional.txt");
    templates.feedback_nocode = load_template(dir / "feedback_nocode.txt");
    templates.feedback_timeout = load_template(dir / "feedback_timeout.txt");
    return templates;
}

std::string render_failing_tests(const std::vector<FailingTest>& tests) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        if (i > 0) out << "\n";
        out << (i + 1) << ". Test: " << tests[i].test_name << "\n"
            << "   Error type: " << tests[i].error_type << "\n"
            << "   Error message: " << tests[i].error_message;
    }
    return out.str();
}

Conversation build_initial_prompt(const BugContext& ctx,
                                  PromptMode mode,
                                  RepairStrategy strategy,
                                  const PromptTemplates& templates) {
    if (ctx.buggy_function_source.empty())
        raise(Errc::InvalidArgument, "bug context has no buggy function source");
    if (ctx.failing_tests.empty())
        raise(Errc::InvalidArgument, "bug context has no failing tests");

    std::string body;
    if (mode == PromptMode::Baseline) {
        body = templates.baseline;
    } else {
        if (!ctx.bic_commit_message || ctx.bic_commit_message->empty())
            raise(Errc::MissingBicContext,
                  "with-bic prompts require the inducing commit message");
        if (ctx.function_changed_in_bic) {
            if (!ctx.bic_diff || ctx.bic_diff->empty())
                raise(Errc::MissingBicContext,
                      "function changed in the inducing commit but no diff was provided");
            body = substitute(templates.bic_changed, "{bic_diff}", *ctx.bic_diff);
        } else {
            body = templates.bic_unchanged;
        }
        body = substitute(body, "{bic_commit_message}", *ctx.bic_commit_message);
    }
    body = substitute(body, "{buggy_function}", ctx.buggy_function_source);
    body = substitute(body, "{failing_tests}", render_failing_tests(ctx.failing_tests));

    Conversation conv;
    conv.messages.push_back(Message{Role::System, templates.system});
    conv.messages.push_back(Message{Role::User, std::move(body)});
    conv.attempt_index = 1;
    conv.round_index = 1;
    conv.mode = mode;
    conv.strategy = strategy;
    return conv;
}

Message build_feedback(const RepairVerdict& verdict, const PromptTemplates& templates) {
    std::string body;
    switch (verdict.kind) {
        case VerdictKind::CompilationError:
            body = substitute(templates.feedback_compile, "{error_message}", verdict.message);
            break;
        case VerdictKind::FunctionalError:
            body = substitute(templates.feedback_functional, "{error_message}", verdict.message);
            break;
        case VerdictKind::NoResponseCode:
            body = templates.feedback_nocode;
            break;
        case VerdictKind::Timeout:
            body = templates.feedback_timeout;
            break;
        case VerdictKind::Plausible:
            raise(Errc::InvalidArgument, "no feedback exists for a plausible verdict");
    }
    return Message{Role::User, std::move(body)};
}

NextAction advance(const Conversation& conv,
                   const Message& reply,
                   const RepairVerdict& verdict,
                   const ConversationLimits& limits,
                   const PromptTemplates& templates) {
    if (reply.role != Role::Assistant)
        raise(Errc::InvalidArgument, "advance expects an assistant reply");
    if (conv.strategy != RepairStrategy::Conversational)
        raise(Errc::InvalidArgument, "advance applies to conversational repair only");

    if (verdict.is_plausible()) return NextAction{NextAction::Kind::Done, std::nullopt};

    // Each round is one model call; earlier attempts always ran the full
    // conversation length, so the spent budget is reconstructible from the
    // indices alone.
    int calls_made = (conv.attempt_index - 1) * limits.max_conversation_length + conv.round_index;
    if (calls_made >= limits.sampling_size)
        raise(Errc::BudgetExhausted,
              "sampling budget of " + std::to_string(limits.sampling_size) + " calls is spent");

    if (conv.round_index >= limits.max_conversation_length) {
        Conversation fresh;
        fresh.messages = {conv.messages.at(0), conv.messages.at(1)};
        fresh.attempt_index = conv.attempt_index + 1;
        fresh.round_index = 1;
        fresh.mode = conv.mode;
        fresh.strategy = conv.strategy;
        return NextAction{NextAction::Kind::Restart, std::move(fresh)};
    }

    Conversation next = conv;
    next.messages.push_back(reply);
    next.messages.push_back(build_feedback(verdict, templates));
    next.round_index = conv.round_index + 1;
    return NextAction{NextAction::Kind::Continue, std::move(next)};
}

}  // namespace regrepair
