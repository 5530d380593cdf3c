#include "regrepair/repair.hpp"

#include "regrepair/changes.hpp"
#include "regrepair/errors.hpp"
#include "regrepair/io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace regrepair {

namespace fs = std::filesystem;

std::string_view extraction_name(PatchCandidate::Extraction extraction) {
    return extraction == PatchCandidate::Extraction::FencedBlock ? "fenced_block" : "bare_code";
}

namespace {

bool identifier_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool contains_token(const std::string& text, const std::string& token) {
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !identifier_char(text[pos - 1]);
        std::size_t end = pos + token.size();
        bool right_ok = end >= text.size() || !identifier_char(text[end]);
        if (left_ok && right_ok) return true;
        pos = end;
    }
    return false;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string::npos) {
            lines.push_back(text.substr(begin));
            break;
        }
        lines.push_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
    return lines;
}

bool is_fence(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    return line.compare(i, 3, "```") == 0;
}

std::string join_lines(const std::vector<std::string>& lines, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out += '\n';
        out += lines[i];
    }
    return out;
}

// First region starting at a line containing the name token that balances its
// braces.
std::optional<std::string> bare_code_region(const std::vector<std::string>& lines,
                                            const std::string& name) {
    for (std::size_t start = 0; start < lines.size(); ++start) {
        if (!contains_token(lines[start], name)) continue;
        int depth = 0;
        bool opened = false;
        for (std::size_t i = start; i < lines.size(); ++i) {
            for (char c : lines[i]) {
                if (c == '{') {
                    ++depth;
                    opened = true;
                } else if (c == '}') {
                    --depth;
                }
            }
            if (opened && depth <= 0) return join_lines(lines, start, i + 1);
        }
        return std::nullopt;  // never balanced
    }
    return std::nullopt;
}

}  // namespace

std::optional<PatchCandidate> extract_patch(const std::string& reply,
                                            const FunctionLocator& target) {
    const std::string name = function_name_token(target);
    std::vector<std::string> lines = split_lines(reply);

    bool any_fence = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!is_fence(lines[i])) continue;
        std::size_t close = i + 1;
        while (close < lines.size() && !is_fence(lines[close])) ++close;
        if (close >= lines.size()) break;  // unterminated fence
        any_fence = true;
        std::string block = join_lines(lines, i + 1, close);
        if (contains_token(block, name) && !block.empty())
            return PatchCandidate{std::move(block), PatchCandidate::Extraction::FencedBlock,
                                  reply};
        i = close;
    }
    if (any_fence) return std::nullopt;

    if (auto region = bare_code_region(lines, name))
        return PatchCandidate{std::move(*region), PatchCandidate::Extraction::BareCode, reply};
    return std::nullopt;
}

PatchedWorkspace::PatchedWorkspace(Workspace ws,
                                   fs::path file,
                                   std::string original,
                                   std::string patched)
    : ws_(std::move(ws)),
      file_(std::move(file)),
      original_(std::move(original)),
      patched_(std::move(patched)) {}

PatchedWorkspace::~PatchedWorkspace() {
    try {
        rollback();
    } catch (...) {
        // Destructor must not throw; a failed rollback leaves the patched file
        // in place, which the next checkout replaces anyway.
    }
}

PatchedWorkspace::PatchedWorkspace(PatchedWorkspace&& other) noexcept
    : ws_(std::move(other.ws_)),
      file_(std::move(other.file_)),
      original_(std::move(other.original_)),
      patched_(std::move(other.patched_)),
      applied_(other.applied_) {
    other.applied_ = false;
}

void PatchedWorkspace::rollback() {
    if (!applied_) return;
    write_text_file(file_, original_);
    applied_ = false;
}

PatchedWorkspace apply_patch(const Workspace& ws,
                             const FunctionLocator& target,
                             const PatchCandidate& patch) {
    target.validate();
    if (patch.function_source.empty())
        raise(Errc::InvalidArgument, "patch candidate has no function source");
    fs::path file = ws.root / target.file_path;
    if (!fs::exists(file)) raise(Errc::FileMissing, file.string() + " does not exist");
    std::string original = read_text_file(file);

    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin < original.size()) {
        std::size_t end = original.find('\n', begin);
        if (end == std::string::npos) {
            lines.push_back(original.substr(begin));
            break;
        }
        lines.push_back(original.substr(begin, end - begin + 1));
        begin = end + 1;
    }

    const int start = target.line_span.start;
    const int end = target.line_span.end;
    if (start < 1 || end > static_cast<int>(lines.size()))
        raise(Errc::SpanOutOfRange,
              "span " + std::to_string(start) + ".." + std::to_string(end) + " exceeds " +
                  std::to_string(lines.size()) + " lines in " + target.file_path);

    std::string replacement = patch.function_source;
    while (!replacement.empty() && replacement.back() == '\n') replacement.pop_back();
    replacement += '\n';

    std::string patched;
    for (int i = 0; i < start - 1; ++i) patched += lines[static_cast<std::size_t>(i)];
    patched += replacement;
    for (std::size_t i = static_cast<std::size_t>(end); i < lines.size(); ++i)
        patched += lines[i];

    write_text_file(file, patched);
    return PatchedWorkspace(ws, std::move(file), std::move(original), std::move(patched));
}

RepairVerdict validate_patch(const PatchedWorkspace& pws,
                             ProjectAdapter& adapter,
                             const std::vector<std::string>& witness_tests,
                             bool full_suite,
                             std::chrono::milliseconds timeout) {
    CompileResult compiled = adapter.compile(pws.workspace());
    if (!compiled.ok)
        return RepairVerdict::compilation_error(compiled.message.empty() ? "compilation failed"
                                                                         : compiled.message);

    auto classify = [](const std::map<std::string, TestOutcome>& outcomes)
        -> std::optional<RepairVerdict> {
        bool timed_out = false;
        std::ostringstream failures;
        bool any_failure = false;
        for (const auto& [test, outcome] : outcomes) {
            if (outcome.is_pass()) continue;
            if (outcome.kind == OutcomeKind::Timeout) timed_out = true;
            if (any_failure) failures << "\n";
            failures << test << ": "
                     << (outcome.error_type.empty()
                             ? std::string(outcome_kind_name(outcome.kind))
                             : outcome.error_type);
            if (!outcome.message.empty()) failures << ": " << outcome.message;
            any_failure = true;
        }
        if (timed_out) return RepairVerdict::timeout();
        if (any_failure) return RepairVerdict::functional_error(failures.str());
        return std::nullopt;
    };

    if (auto verdict =
            classify(adapter.run_tests(pws.workspace(), TestSelection::of(witness_tests), timeout)))
        return *verdict;
    if (full_suite) {
        if (auto verdict = classify(adapter.run_tests(pws.workspace(), TestSelection::all(), timeout)))
            return *verdict;
    }
    return RepairVerdict::plausible();
}

WorkspacePatchJudge::WorkspacePatchJudge(Workspace ws,
                                         FunctionLocator target,
                                         ProjectAdapter& adapter,
                                         std::vector<std::string> witness_tests,
                                         bool full_suite,
                                         std::chrono::milliseconds timeout)
    : ws_(std::move(ws)),
      target_(std::move(target)),
      adapter_(adapter),
      witness_tests_(std::move(witness_tests)),
      full_suite_(full_suite),
      timeout_(timeout) {}

JudgeResult WorkspacePatchJudge::judge(const PatchCandidate& candidate, int, int) {
    PatchedWorkspace pws = apply_patch(ws_, target_, candidate);
    JudgeResult result;
    result.unified_diff =
        render_unified_diff(pws.original_content(), pws.patched_content(),
                            "a/" + target_.file_path, "b/" + target_.file_path);
    result.verdict = validate_patch(pws, adapter_, witness_tests_, full_suite_, timeout_);
    return result;  // pws rolls the workspace back on destruction
}

namespace {

struct TraceBuilder {
    RepairTrace trace;
    const CostModel& cost_model;
    int call_counter{0};

    TraceBuilder(std::string bug_id, const RepairOptions& options)
        : cost_model(options.cost_model) {
        trace.bug_id = std::move(bug_id);
        trace.strategy = options.strategy;
        trace.mode = options.mode;
    }

    void log_messages(const Conversation& conv, std::size_t from) {
        for (std::size_t i = from; i < conv.messages.size(); ++i)
            trace.transcript.push_back(TranscriptRecord{conv.attempt_index, conv.round_index,
                                                        conv.messages[i].role,
                                                        conv.messages[i].content});
    }

    int record_call(const Conversation& conv, const ModelReply& reply,
                    const RepairVerdict& verdict) {
        ++call_counter;
        trace.transcript.push_back(TranscriptRecord{conv.attempt_index, conv.round_index,
                                                    Role::Assistant, reply.content});
        trace.calls.push_back(RepairCall{conv.attempt_index, conv.round_index,
                                         reply.input_tokens, reply.output_tokens, verdict});
        trace.total_cost += estimate_cost(reply.input_tokens, reply.output_tokens, cost_model);
        return call_counter;
    }
};

JudgeResult judge_reply(const std::string& reply,
                        const FunctionLocator& target,
                        PatchJudge& judge,
                        int attempt,
                        int round,
                        std::optional<PatchCandidate>& candidate_out) {
    candidate_out = extract_patch(reply, target);
    if (!candidate_out) return JudgeResult{RepairVerdict::no_response_code(), ""};
    return judge.judge(*candidate_out, attempt, round);
}

}  // namespace

RepairTrace repair_zero_shot(const std::string& bug_id,
                             const BugContext& ctx,
                             const FunctionLocator& target,
                             const RepairOptions& options,
                             ChatGateway& gateway,
                             PatchJudge& judge,
                             const PromptTemplates& templates) {
    TraceBuilder builder(bug_id, options);
    Conversation initial =
        build_initial_prompt(ctx, options.mode, RepairStrategy::ZeroShot, templates);

    for (int attempt = 1; attempt <= options.sampling_size; ++attempt) {
        Conversation conv = initial;
        conv.attempt_index = attempt;
        builder.log_messages(conv, 0);

        ModelReply reply = gateway.complete(conv, options.model);
        std::optional<PatchCandidate> candidate;
        JudgeResult judged = judge_reply(reply.content, target, judge, attempt, 1, candidate);
        int call_index = builder.record_call(conv, reply, judged.verdict);
        if (!judged.unified_diff.empty())
            builder.trace.patches.emplace_back(call_index, judged.unified_diff);
        if (judged.verdict.is_plausible()) {
            builder.trace.plausible_patch = std::move(candidate);
            break;
        }
    }
    return builder.trace;
}

RepairTrace repair_conversational(const std::string& bug_id,
                                  const BugContext& ctx,
                                  const FunctionLocator& target,
                                  const RepairOptions& options,
                                  ChatGateway& gateway,
                                  PatchJudge& judge,
                                  const PromptTemplates& templates) {
    TraceBuilder builder(bug_id, options);
    ConversationLimits limits{options.max_conversation_length, options.sampling_size};
    Conversation conv =
        build_initial_prompt(ctx, options.mode, RepairStrategy::Conversational, templates);
    builder.log_messages(conv, 0);

    for (;;) {
        ModelReply reply = gateway.complete(conv, options.model);
        std::optional<PatchCandidate> candidate;
        JudgeResult judged = judge_reply(reply.content, target, judge, conv.attempt_index,
                                         conv.round_index, candidate);
        int call_index = builder.record_call(conv, reply, judged.verdict);
        if (!judged.unified_diff.empty())
            builder.trace.patches.emplace_back(call_index, judged.unified_diff);

        if (judged.verdict.is_plausible()) {
            builder.trace.plausible_patch = std::move(candidate);
            break;
        }
        if (builder.call_counter >= options.sampling_size) break;  // budget spent

        NextAction action =
            advance(conv, Message{Role::Assistant, reply.content}, judged.verdict, limits,
                    templates);
        if (action.kind == NextAction::Kind::Restart) {
            conv = std::move(*action.conversation);
            builder.log_messages(conv, 0);
        } else {
            // Continue: log the feedback message appended after the reply.
            std::size_t previous = conv.messages.size() + 1;  // reply already logged
            conv = std::move(*action.conversation);
            builder.log_messages(conv, previous);
        }
    }
    return builder.trace;
}

}  // namespace regrepair
