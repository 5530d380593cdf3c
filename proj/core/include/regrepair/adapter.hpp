#pragma once

#include "regrepair/model.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace regrepair {

/// Templated command lines driving a real build system. {tests} expands to the
/// requested test ids joined with ';', {timeout} to the timeout in seconds.
struct AdapterSpec {
    std::string compile_command;
    std::string test_command;
    std::string coverage_command;       // optional
    std::string coverage_report_path;   // optional, workspace-relative
    std::string pass_marker{"PASS"};
    std::string fail_marker{"FAIL"};

    void validate() const;  // commands non-empty, markers disjoint
};

enum class AdapterKind { CommandTemplate, ScriptedFixture };

struct Workspace {
    std::string bug_id;
    SnapshotRole role{SnapshotRole::PreFixing};
    std::filesystem::path root;
    AdapterKind adapter_kind{AdapterKind::CommandTemplate};
};

/// Per file: the set of covered 1-based line numbers. Paths are
/// workspace-relative with forward slashes.
using CoverageMap = std::map<std::string, std::set<int>>;

struct TestSelection {
    bool all_tests{false};
    std::vector<std::string> ids;

    static TestSelection all() { return TestSelection{true, {}}; }
    static TestSelection of(std::vector<std::string> ids) {
        return TestSelection{false, std::move(ids)};
    }
};

struct BugManifest {
    RegressionInstance bug;
    AdapterSpec adapter;
};

/// One directory per bug_id holding manifest.json plus the four snapshot
/// trees pre-inducing/ inducing/ pre-fixing/ fixing/.
class BugStore {
  public:
    explicit BugStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::vector<std::string> list_bugs() const;
    bool has_bug(const std::string& bug_id) const;
    BugManifest load(const std::string& bug_id) const;
    std::filesystem::path snapshot_dir(const std::string& bug_id, SnapshotRole role) const;

  private:
    std::filesystem::path root_;
};

/// Materializes the snapshot tree into dest (which must be empty or absent)
/// and records the workspace metadata the adapter commands need.
Workspace checkout(const BugStore& store,
                   const std::string& bug_id,
                   SnapshotRole role,
                   const std::filesystem::path& dest);

/// Rebinds a previously checked-out directory (reads .workspace.json).
Workspace load_workspace(const std::filesystem::path& root);

/// Manifest subset stored alongside a checkout so adapter commands can run
/// without access to the bug store.
struct WorkspaceMeta {
    std::string bug_id;
    SnapshotRole role{SnapshotRole::PreFixing};
    std::vector<std::string> witness_tests;
    FunctionLocator buggy_function;
    AdapterSpec adapter;
};

WorkspaceMeta load_workspace_meta(const std::filesystem::path& root);

class ProjectAdapter {
  public:
    virtual ~ProjectAdapter() = default;

    virtual CompileResult compile(const Workspace& ws) = 0;
    virtual std::map<std::string, TestOutcome> run_tests(const Workspace& ws,
                                                         const TestSelection& tests,
                                                         std::chrono::milliseconds timeout) = 0;
    virtual CoverageMap collect_coverage(const Workspace& ws,
                                         const std::vector<std::string>& tests) = 0;
};

/// Dispatches on Workspace::adapter_kind: scripted fixtures read fixture.json
/// from the tree, command workspaces execute the manifest's command templates.
std::unique_ptr<ProjectAdapter> make_default_adapter();

CoverageMap parse_lcov(const std::string& text);
CoverageMap parse_coverage_json(const std::string& text);

}  // namespace regrepair
