#include "regrepair/validator.hpp"

#include "regrepair/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <sstream>
#include <thread>

namespace regrepair {

namespace fs = std::filesystem;

std::string_view funnel_stage_name(FunnelStage stage) {
    switch (stage) {
        case FunnelStage::RejectedDate: return "rejected_date";
        case FunnelStage::RejectedExecutability: return "rejected_executability";
        case FunnelStage::RejectedValidity: return "rejected_validity";
        case FunnelStage::RejectedUtility: return "rejected_utility";
        case FunnelStage::Confirmed: return "confirmed";
    }
    return "?";
}

bool date_on_or_after(std::string_view date, std::string_view cutoff) {
    auto day_part = [](std::string_view text) {
        return text.size() > 10 ? text.substr(0, 10) : text;
    };
    std::string_view day = day_part(date);
    if (day.size() != 10 || day[4] != '-' || day[7] != '-')
        raise(Errc::InvalidArgument, "expected YYYY-MM-DD date, got '" + std::string(date) + "'");
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(day[i])))
            raise(Errc::InvalidArgument,
                  "expected YYYY-MM-DD date, got '" + std::string(date) + "'");
    // ISO dates at day granularity compare lexicographically.
    return day >= day_part(cutoff);
}

BugRun::BugRun(const BugStore& store,
               BugManifest manifest,
               fs::path workdir,
               ProjectAdapter& adapter,
               std::chrono::milliseconds test_timeout)
    : store_(store),
      manifest_(std::move(manifest)),
      workdir_(std::move(workdir)),
      adapter_(adapter),
      timeout_(test_timeout) {}

BugRun::~BugRun() {
    if (keep_workspaces_) return;
    std::error_code ec;
    fs::remove_all(workdir_ / manifest_.bug.bug_id, ec);
}

const Workspace& BugRun::workspace(SnapshotRole role) {
    auto it = workspaces_.find(role);
    if (it != workspaces_.end()) return it->second;
    fs::path dest = workdir_ / manifest_.bug.bug_id / std::string(role_name(role));
    Workspace ws = checkout(store_, manifest_.bug.bug_id, role, dest);
    return workspaces_.emplace(role, std::move(ws)).first->second;
}

CompileResult BugRun::ensure_compiled(SnapshotRole role) {
    auto it = compiled_.find(role);
    if (it != compiled_.end()) return it->second;
    CompileResult result = adapter_.compile(workspace(role));
    return compiled_.emplace(role, std::move(result)).first->second;
}

std::optional<std::string> BugRun::check_executability() {
    for (SnapshotRole role : kAllRoles) {
        CompileResult result = ensure_compiled(role);
        if (!result.ok)
            return std::string(role_name(role)) + " does not compile: " + result.message;
    }
    return std::nullopt;
}

std::pair<bool, OutcomeMatrix> BugRun::check_validity() {
    OutcomeMatrix matrix;
    matrix.witness_tests = manifest_.bug.witness_tests;
    for (SnapshotRole role : kAllRoles) {
        matrix.compile_status[role] = ensure_compiled(role);
        matrix.outcomes[role] = adapter_.run_tests(
            workspace(role), TestSelection::of(manifest_.bug.witness_tests), timeout_);
    }
    return {is_regression(matrix), std::move(matrix)};
}

std::optional<std::string> BugRun::check_utility() {
    const std::vector<std::string>& witness = manifest_.bug.witness_tests;

    auto failing_set = [&](SnapshotRole role) {
        std::vector<std::string> failing;
        for (const auto& [test, outcome] :
             adapter_.run_tests(workspace(role), TestSelection::all(), timeout_))
            if (!outcome.is_pass()) failing.push_back(test);
        std::sort(failing.begin(), failing.end());
        return failing;
    };

    std::vector<std::string> pre_fixing_failures = failing_set(SnapshotRole::PreFixing);
    std::vector<std::string> expected(witness);
    std::sort(expected.begin(), expected.end());
    if (pre_fixing_failures != expected) {
        std::ostringstream detail;
        detail << "pre-fixing full suite fails {";
        for (std::size_t i = 0; i < pre_fixing_failures.size(); ++i)
            detail << (i ? ", " : "") << pre_fixing_failures[i];
        detail << "} instead of exactly the witness set";
        return detail.str();
    }

    std::vector<std::string> fixing_failures = failing_set(SnapshotRole::Fixing);
    if (!fixing_failures.empty())
        return "fixing snapshot still fails " + fixing_failures.front() +
               (fixing_failures.size() > 1
                    ? " and " + std::to_string(fixing_failures.size() - 1) + " more"
                    : "");
    return std::nullopt;
}

FunnelVerdict validate_bug(const BugStore& store,
                           const BugManifest& manifest,
                           const fs::path& workdir,
                           ProjectAdapter& adapter,
                           const FunnelOptions& options) {
    BugRun run(store, manifest, workdir, adapter, options.test_timeout);
    run.keep_workspaces(options.keep_workspaces);

    try {
        if (auto detail = run.check_executability())
            return FunnelVerdict{FunnelStage::RejectedExecutability, *detail, std::nullopt};
    } catch (const Error& e) {
        return FunnelVerdict{FunnelStage::RejectedExecutability, e.what(), std::nullopt};
    }

    OutcomeMatrix matrix;
    try {
        auto [valid, m] = run.check_validity();
        matrix = std::move(m);
        if (!valid)
            return FunnelVerdict{FunnelStage::RejectedValidity,
                                 "witness outcomes do not satisfy the regression predicate",
                                 std::move(matrix)};
    } catch (const Error& e) {
        return FunnelVerdict{FunnelStage::RejectedValidity, e.what(), std::nullopt};
    }

    try {
        if (auto detail = run.check_utility())
            return FunnelVerdict{FunnelStage::RejectedUtility, *detail, std::move(matrix)};
    } catch (const Error& e) {
        return FunnelVerdict{FunnelStage::RejectedUtility, e.what(), std::move(matrix)};
    }
    return FunnelVerdict{FunnelStage::Confirmed, "", std::move(matrix)};
}

FunnelReport run_funnel(const BugStore& store,
                        const std::vector<std::string>& bug_ids,
                        const fs::path& workdir,
                        ProjectAdapter& adapter,
                        const FunnelOptions& options) {
    FunnelReport report;
    report.input = static_cast<long>(bug_ids.size());
    report.verdicts.resize(bug_ids.size());

    auto evaluate = [&](std::size_t index) {
        const std::string& bug_id = bug_ids[index];
        FunnelVerdict verdict;
        try {
            BugManifest manifest = store.load(bug_id);
            if (options.date_cutoff &&
                !date_on_or_after(manifest.bug.fixing_date, *options.date_cutoff)) {
                verdict = FunnelVerdict{FunnelStage::RejectedDate,
                                        "fixing commit dated " + manifest.bug.fixing_date +
                                            ", before cutoff " + *options.date_cutoff,
                                        std::nullopt};
            } else {
                verdict = validate_bug(store, manifest, workdir, adapter, options);
            }
        } catch (const Error& e) {
            verdict = FunnelVerdict{FunnelStage::RejectedExecutability, e.what(), std::nullopt};
        }
        report.verdicts[index] = {bug_id, std::move(verdict)};
    };

    int workers = std::max(1, options.parallelism);
    if (workers == 1) {
        for (std::size_t i = 0; i < bug_ids.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < bug_ids.size();
                     i = next.fetch_add(1))
                    evaluate(i);
            });
        for (std::thread& t : pool) t.join();
    }

    for (const auto& [_, verdict] : report.verdicts) {
        switch (verdict.stage) {
            case FunnelStage::RejectedDate: ++report.rejected_date; break;
            case FunnelStage::RejectedExecutability: ++report.rejected_executability; break;
            case FunnelStage::RejectedValidity: ++report.rejected_validity; break;
            case FunnelStage::RejectedUtility: ++report.rejected_utility; break;
            case FunnelStage::Confirmed: ++report.confirmed; break;
        }
    }
    return report;
}

}  // namespace regrepair
