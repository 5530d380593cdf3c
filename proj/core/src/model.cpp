#include "regrepair/model.hpp"

#include "regrepair/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace regrepair {

std::string_view role_name(SnapshotRole role) {
    switch (role) {
        case SnapshotRole::PreInducing: return "pre-inducing";
        case SnapshotRole::Inducing: return "inducing";
        case SnapshotRole::PreFixing: return "pre-fixing";
        case SnapshotRole::Fixing: return "fixing";
    }
    return "?";
}

SnapshotRole role_from_name(std::string_view name) {
    for (SnapshotRole role : kAllRoles)
        if (role_name(role) == name) return role;
    raise(Errc::InvalidArgument, "unknown snapshot role '" + std::string(name) + "'");
}

void FunctionLocator::validate() const {
    if (file_path.empty()) raise(Errc::InvalidArgument, "function locator has empty file path");
    if (signature.empty()) raise(Errc::InvalidArgument, "function locator has empty signature");
    if (line_span.start < 1 || line_span.start > line_span.end)
        raise(Errc::InvalidArgument,
              "function locator span must satisfy 1 <= start <= end, got " +
                  std::to_string(line_span.start) + ".." + std::to_string(line_span.end));
}

namespace {

bool identifier_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

}  // namespace

std::string function_name_token(const FunctionLocator& locator) {
    const std::string& sig = locator.signature;
    std::size_t paren = sig.find('(');
    std::size_t end = paren == std::string::npos ? sig.size() : paren;
    while (end > 0 && !identifier_char(sig[end - 1])) --end;
    std::size_t begin = end;
    while (begin > 0 && identifier_char(sig[begin - 1])) --begin;
    if (begin == end)
        raise(Errc::InvalidArgument, "cannot find a function name in signature '" + sig + "'");
    return sig.substr(begin, end - begin);
}

void RegressionInstance::validate() const {
    if (bug_id.empty()) raise(Errc::InvalidArgument, "bug_id is empty");
    if (witness_tests.empty()) raise(Errc::InvalidArgument, bug_id + ": witness test set is empty");
    if (inducing_commit == fixing_commit)
        raise(Errc::InvalidArgument, bug_id + ": inducing and fixing commit are identical");
    buggy_function.validate();
}

std::string_view outcome_kind_name(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Pass: return "pass";
        case OutcomeKind::FunctionalFail: return "functional_fail";
        case OutcomeKind::CompileFail: return "compile_fail";
        case OutcomeKind::Timeout: return "timeout";
        case OutcomeKind::Crash: return "crash";
    }
    return "?";
}

TestOutcome TestOutcome::pass() {
    return TestOutcome{OutcomeKind::Pass, "", ""};
}

TestOutcome TestOutcome::functional_fail(std::string error_type, std::string message) {
    if (error_type.empty()) raise(Errc::InvalidArgument, "FunctionalFail requires an error type");
    return TestOutcome{OutcomeKind::FunctionalFail, std::move(error_type), std::move(message)};
}

TestOutcome TestOutcome::compile_fail(std::string message) {
    return TestOutcome{OutcomeKind::CompileFail, "", std::move(message)};
}

TestOutcome TestOutcome::timeout() {
    return TestOutcome{OutcomeKind::Timeout, "", ""};
}

TestOutcome TestOutcome::crash(std::string message) {
    return TestOutcome{OutcomeKind::Crash, "", std::move(message)};
}

bool TestOutcome::is_behavioral_failure() const {
    return kind == OutcomeKind::FunctionalFail || kind == OutcomeKind::Timeout ||
           kind == OutcomeKind::Crash;
}

void OutcomeMatrix::validate() const {
    if (witness_tests.empty()) raise(Errc::IncompleteMatrix, "matrix has no witness tests");
    for (SnapshotRole role : kAllRoles) {
        auto compile_it = compile_status.find(role);
        if (compile_it == compile_status.end())
            raise(Errc::IncompleteMatrix,
                  "missing compile status for role " + std::string(role_name(role)));
        auto outcome_it = outcomes.find(role);
        if (outcome_it == outcomes.end())
            raise(Errc::IncompleteMatrix,
                  "missing outcomes for role " + std::string(role_name(role)));
        for (const std::string& test : witness_tests) {
            auto cell = outcome_it->second.find(test);
            if (cell == outcome_it->second.end())
                raise(Errc::IncompleteMatrix,
                      "missing outcome for (" + std::string(role_name(role)) + ", " + test + ")");
            if (!compile_it->second.ok && cell->second.kind != OutcomeKind::CompileFail)
                raise(Errc::InvalidArgument,
                      "role " + std::string(role_name(role)) +
                          " failed to compile but test " + test + " is not CompileFail");
        }
    }
}

bool is_regression(const OutcomeMatrix& matrix) {
    matrix.validate();
    for (const std::string& test : matrix.witness_tests) {
        const TestOutcome& pre_inducing = matrix.outcomes.at(SnapshotRole::PreInducing).at(test);
        const TestOutcome& inducing = matrix.outcomes.at(SnapshotRole::Inducing).at(test);
        const TestOutcome& pre_fixing = matrix.outcomes.at(SnapshotRole::PreFixing).at(test);
        const TestOutcome& fixing = matrix.outcomes.at(SnapshotRole::Fixing).at(test);
        if (!pre_inducing.is_pass() || !fixing.is_pass()) return false;
        if (!inducing.is_behavioral_failure() || !pre_fixing.is_behavioral_failure()) return false;
    }
    return true;
}

std::string_view bug_category_name(BugCategory category) {
    switch (category) {
        case BugCategory::Local: return "local";
        case BugCategory::Remote: return "remote";
        case BugCategory::Unmask: return "unmask";
    }
    return "?";
}

BugCategory bug_category_from_name(std::string_view name) {
    if (name == "local") return BugCategory::Local;
    if (name == "remote") return BugCategory::Remote;
    if (name == "unmask") return BugCategory::Unmask;
    raise(Errc::InvalidArgument, "unknown bug category '" + std::string(name) + "'");
}

std::string_view operator_group_acronym(OperatorGroup group) {
    switch (group) {
        case OperatorGroup::Assignment: return "asgn";
        case OperatorGroup::Condition: return "cnd";
        case OperatorGroup::Loop: return "lp";
        case OperatorGroup::MethodCall: return "mc";
        case OperatorGroup::MethodDefinition: return "md";
        case OperatorGroup::ObjectInstantiation: return "obj";
        case OperatorGroup::Exception: return "exp";
        case OperatorGroup::Return: return "ret";
        case OperatorGroup::Variable: return "var";
        case OperatorGroup::Revert: return "rev";
    }
    return "?";
}

OperatorGroup operator_group_from_acronym(std::string_view acronym) {
    static constexpr std::array<OperatorGroup, 10> groups = {
        OperatorGroup::Assignment,    OperatorGroup::Condition,
        OperatorGroup::Loop,          OperatorGroup::MethodCall,
        OperatorGroup::MethodDefinition, OperatorGroup::ObjectInstantiation,
        OperatorGroup::Exception,     OperatorGroup::Return,
        OperatorGroup::Variable,      OperatorGroup::Revert,
    };
    for (OperatorGroup group : groups)
        if (operator_group_acronym(group) == acronym) return group;
    raise(Errc::InvalidTag, "unknown operator group '" + std::string(acronym) + "'");
}

std::string_view operator_action_name(OperatorAction action) {
    switch (action) {
        case OperatorAction::Add: return "add";
        case OperatorAction::Remove: return "remove";
        case OperatorAction::Modify: return "modify";
        case OperatorAction::NA: return "na";
    }
    return "?";
}

OperatorAction operator_action_from_name(std::string_view name) {
    if (name == "add" || name == "A") return OperatorAction::Add;
    if (name == "remove" || name == "R") return OperatorAction::Remove;
    if (name == "modify" || name == "M") return OperatorAction::Modify;
    if (name == "na" || name == "NA" || name == "N.A") return OperatorAction::NA;
    raise(Errc::InvalidTag, "unknown operator action '" + std::string(name) + "'");
}

void RepairOperatorTag::validate() const {
    if (group == OperatorGroup::Revert) {
        if (action != OperatorAction::NA)
            raise(Errc::InvalidTag, "revert operator admits no add/remove/modify action");
        return;
    }
    if (action == OperatorAction::NA)
        raise(Errc::InvalidTag,
              std::string(operator_group_acronym(group)) + " requires an explicit action");
    if (group == OperatorGroup::Exception && action == OperatorAction::Modify)
        raise(Errc::InvalidTag, "exception operator admits only add/remove");
}

std::string RepairOperatorTag::label() const {
    std::string out(operator_group_acronym(group));
    switch (action) {
        case OperatorAction::Add: out += "A"; break;
        case OperatorAction::Remove: out += "R"; break;
        case OperatorAction::Modify: out += "M"; break;
        case OperatorAction::NA: break;
    }
    return out;
}

namespace {

std::vector<std::string> split_lines_simple(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) {
            lines.emplace_back(text.substr(begin));
            break;
        }
        lines.emplace_back(text.substr(begin, end - begin));
        begin = end + 1;
    }
    return lines;
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

// Drops the marker and the test id from a marker line, leaving the failure
// payload (typically "error.Type: message").
std::string strip_marker_and_id(const std::string& line,
                                std::string_view marker,
                                std::string_view test_id) {
    std::string rest = line;
    std::size_t pos = rest.find(marker);
    if (pos != std::string::npos) rest.erase(pos, marker.size());
    if (!test_id.empty()) {
        pos = rest.find(test_id);
        if (pos != std::string::npos) {
            rest.erase(pos, test_id.size());
            if (pos < rest.size() && rest[pos] == ':') rest.erase(pos, 1);
        }
    }
    return trim(rest);
}

}  // namespace

TestOutcome classify_outcome(const RawProcessOutput& raw,
                             bool timeout_hit,
                             std::string_view pass_marker,
                             std::string_view fail_marker,
                             std::string_view test_id) {
    if (timeout_hit) return TestOutcome::timeout();
    if (raw.compile_failed)
        return TestOutcome::compile_fail(raw.compile_message.empty() ? raw.output
                                                                     : raw.compile_message);
    if (pass_marker.empty() || fail_marker.empty())
        raise(Errc::UnparseableOutput, "adapter has no pass/fail markers configured");

    std::vector<std::string> lines = split_lines_simple(raw.output);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(fail_marker) == std::string::npos) continue;
        // Failure payload: remainder of the marker line, else the next
        // non-empty line (runners that print the exception separately).
        std::string payload = strip_marker_and_id(lines[i], fail_marker, test_id);
        for (std::size_t j = i + 1; payload.empty() && j < lines.size(); ++j)
            payload = trim(lines[j]);
        std::size_t sep = payload.find(": ");
        if (sep != std::string::npos && sep > 0)
            return TestOutcome::functional_fail(payload.substr(0, sep), payload.substr(sep + 2));
        return TestOutcome::functional_fail("TestFailure", payload);
    }
    if (raw.output.find(pass_marker) != std::string::npos) return TestOutcome::pass();
    if (raw.signaled)
        return TestOutcome::crash("test runner terminated by signal " +
                                  std::to_string(raw.signal_no));
    raise(Errc::UnparseableOutput,
          "neither pass marker '" + std::string(pass_marker) + "' nor fail marker '" +
              std::string(fail_marker) + "' found in adapter output");
}

}  // namespace regrepair
