#pragma once

#include "regrepair/adapter.hpp"
#include "regrepair/model.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace regrepair {

/// Stage reached in the three-step validation funnel. A bug rejected at one
/// stage is never evaluated at a later one.
enum class FunnelStage {
    RejectedDate,
    RejectedExecutability,
    RejectedValidity,
    RejectedUtility,
    Confirmed,
};
std::string_view funnel_stage_name(FunnelStage stage);

struct FunnelVerdict {
    FunnelStage stage{FunnelStage::Confirmed};
    std::string detail;
    // Present iff the validity step ran (stage >= RejectedValidity).
    std::optional<OutcomeMatrix> matrix;
};

struct FunnelReport {
    long input{0};
    long rejected_date{0};
    long rejected_executability{0};
    long rejected_validity{0};
    long rejected_utility{0};
    long confirmed{0};
    std::vector<std::pair<std::string, FunnelVerdict>> verdicts;  // input order
};

struct FunnelOptions {
    std::optional<std::string> date_cutoff;  // YYYY-MM-DD; keep fixing_date >= cutoff
    std::chrono::milliseconds test_timeout{300'000};
    bool keep_workspaces{false};
    int parallelism{1};
};

/// Drives the three validation steps for one bug over lazily checked-out
/// workspaces under workdir/<bug_id>/<role>/.
class BugRun {
  public:
    BugRun(const BugStore& store,
           BugManifest manifest,
           std::filesystem::path workdir,
           ProjectAdapter& adapter,
           std::chrono::milliseconds test_timeout);
    ~BugRun();

    BugRun(const BugRun&) = delete;
    BugRun& operator=(const BugRun&) = delete;

    /// Step 1: all four snapshots must compile. Returns the rejection detail,
    /// or nullopt when executable.
    std::optional<std::string> check_executability();

    /// Step 2: runs the witness tests on all four snapshots and evaluates the
    /// regression predicate over the resulting matrix.
    std::pair<bool, OutcomeMatrix> check_validity();

    /// Step 3: on PreFixing the full suite must fail exactly the witness set;
    /// on Fixing it must pass entirely. Returns the rejection detail or
    /// nullopt.
    std::optional<std::string> check_utility();

    const Workspace& workspace(SnapshotRole role);  // lazy checkout
    void keep_workspaces(bool keep) { keep_workspaces_ = keep; }

  private:
    CompileResult ensure_compiled(SnapshotRole role);

    const BugStore& store_;
    BugManifest manifest_;
    std::filesystem::path workdir_;
    ProjectAdapter& adapter_;
    std::chrono::milliseconds timeout_;
    bool keep_workspaces_{false};
    std::map<SnapshotRole, Workspace> workspaces_;
    std::map<SnapshotRole, CompileResult> compiled_;
};

/// Steps 1-3 for one bug (no date filter); adapter errors become the verdict
/// detail of the stage in which they occurred.
FunnelVerdict validate_bug(const BugStore& store,
                           const BugManifest& manifest,
                           const std::filesystem::path& workdir,
                           ProjectAdapter& adapter,
                           const FunnelOptions& options);

/// Date filter followed by steps 1-3, short-circuiting per bug.
FunnelReport run_funnel(const BugStore& store,
                        const std::vector<std::string>& bug_ids,
                        const std::filesystem::path& workdir,
                        ProjectAdapter& adapter,
                        const FunnelOptions& options);

/// True when `date` (YYYY-MM-DD, possibly with a time suffix) is on or after
/// the cutoff day. ISO dates compare lexicographically.
bool date_on_or_after(std::string_view date, std::string_view cutoff);

}  // namespace regrepair
