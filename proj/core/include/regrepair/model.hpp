#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regrepair {

/// The four project snapshots that witness a regression: the commit that
/// introduced the bug and its predecessor, and the commit that fixed it and
/// its predecessor. The declaration order is the total order.
enum class SnapshotRole { PreInducing, Inducing, PreFixing, Fixing };

inline constexpr std::array<SnapshotRole, 4> kAllRoles = {
    SnapshotRole::PreInducing,
    SnapshotRole::Inducing,
    SnapshotRole::PreFixing,
    SnapshotRole::Fixing,
};

std::string_view role_name(SnapshotRole role);  // "pre-inducing", "inducing", ...
SnapshotRole role_from_name(std::string_view name);

/// 1-based inclusive line range, matching unified-diff and coverage-report
/// conventions.
struct LineSpan {
    int start{1};
    int end{1};
};

struct FunctionLocator {
    std::string file_path;  // workspace-relative
    std::string signature;
    LineSpan line_span;

    void validate() const;
};

/// The function's name token, i.e. the identifier preceding '(' in the
/// signature. Used for locating the function in model replies.
std::string function_name_token(const FunctionLocator& locator);

struct RegressionInstance {
    std::string bug_id;
    std::string project_id;
    std::string inducing_commit;
    std::string fixing_commit;
    std::string fixing_date;  // YYYY-MM-DD, UTC midnight granularity
    std::vector<std::string> witness_tests;
    std::string inducing_message;
    std::string fixing_message;
    FunctionLocator buggy_function;

    void validate() const;
};

enum class OutcomeKind { Pass, FunctionalFail, CompileFail, Timeout, Crash };

std::string_view outcome_kind_name(OutcomeKind kind);

struct TestOutcome {
    OutcomeKind kind{OutcomeKind::Pass};
    std::string error_type;  // FunctionalFail only, non-empty there
    std::string message;

    static TestOutcome pass();
    static TestOutcome functional_fail(std::string error_type, std::string message);
    static TestOutcome compile_fail(std::string message);
    static TestOutcome timeout();
    static TestOutcome crash(std::string message);

    bool is_pass() const { return kind == OutcomeKind::Pass; }
    /// FunctionalFail, Timeout or Crash — an observable behavioral break.
    /// CompileFail is not an accepted failure mode for regression witnessing.
    bool is_behavioral_failure() const;

    bool operator==(const TestOutcome&) const = default;
};

struct CompileResult {
    bool ok{true};
    std::string message;
};

/// Per-(snapshot, test) outcomes for the witness tests plus per-snapshot
/// compile status. The regression predicate is evaluated against this.
struct OutcomeMatrix {
    std::vector<std::string> witness_tests;
    std::map<SnapshotRole, CompileResult> compile_status;
    std::map<SnapshotRole, std::map<std::string, TestOutcome>> outcomes;

    /// Throws IncompleteMatrix if a role or witness cell is missing and
    /// InvalidArgument if a failed compile does not propagate to every cell.
    void validate() const;
};

/// True iff every witness test passes on PreInducing and Fixing and breaks
/// behaviorally (not a compile failure) on Inducing and PreFixing.
bool is_regression(const OutcomeMatrix& matrix);

enum class BugCategory { Local, Remote, Unmask };
std::string_view bug_category_name(BugCategory category);
BugCategory bug_category_from_name(std::string_view name);

enum class OperatorGroup {
    Assignment,
    Condition,
    Loop,
    MethodCall,
    MethodDefinition,
    ObjectInstantiation,
    Exception,
    Return,
    Variable,
    Revert,
};
enum class OperatorAction { Add, Remove, Modify, NA };

std::string_view operator_group_acronym(OperatorGroup group);  // "asgn", "cnd", ...
OperatorGroup operator_group_from_acronym(std::string_view acronym);
std::string_view operator_action_name(OperatorAction action);
OperatorAction operator_action_from_name(std::string_view name);

struct RepairOperatorTag {
    OperatorGroup group{OperatorGroup::Assignment};
    OperatorAction action{OperatorAction::Add};

    /// Exception admits Add/Remove only; Revert admits NA only; every other
    /// group admits Add/Remove/Modify. Throws InvalidTag otherwise.
    void validate() const;

    /// Display label: acronym plus action letter, e.g. "cndA"; bare acronym
    /// for Revert ("rev").
    std::string label() const;

    auto operator<=>(const RepairOperatorTag&) const = default;
};

/// Raw evidence from one adapter invocation for a single test.
struct RawProcessOutput {
    int exit_code{0};
    bool signaled{false};
    int signal_no{0};
    std::string output;
    bool compile_failed{false};
    std::string compile_message;
};

/// Maps raw adapter evidence onto a TestOutcome. Timeout dominates; a failed
/// compile phase forces CompileFail; a fail-marker line is parsed as
/// "error.Type: message"; a pass marker yields Pass. When neither marker is
/// present, UnparseableOutput is raised (adapter misconfiguration), unless the
/// process died on a signal, which is reported as Crash.
TestOutcome classify_outcome(const RawProcessOutput& raw,
                             bool timeout_hit,
                             std::string_view pass_marker,
                             std::string_view fail_marker,
                             std::string_view test_id = {});

}  // namespace regrepair
