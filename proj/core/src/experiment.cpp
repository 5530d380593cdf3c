#include "regrepair/experiment.hpp"

#include "regrepair/changes.hpp"
#include "regrepair/errors.hpp"
#include "regrepair/io.hpp"
#include "regrepair/serialize.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

namespace regrepair {

namespace fs = std::filesystem;

BugContext build_bug_context(const BugStore& store,
                             const BugManifest& manifest,
                             ProjectAdapter& adapter,
                             const fs::path& workdir,
                             PromptMode mode,
                             std::chrono::milliseconds timeout) {
    const std::string& bug_id = manifest.bug.bug_id;
    fs::path bug_dir = workdir / bug_id;

    Workspace pre_fixing = checkout(store, bug_id, SnapshotRole::PreFixing,
                                    bug_dir / std::string(role_name(SnapshotRole::PreFixing)));
    CompileResult compiled = adapter.compile(pre_fixing);
    if (!compiled.ok)
        raise(Errc::AdapterMissing,
              bug_id + ": pre-fixing snapshot does not compile: " + compiled.message);

    BugContext ctx;

    // The buggy function body, cut from the pre-fixing tree via the locator.
    const FunctionLocator& locator = manifest.bug.buggy_function;
    std::string content = read_text_file(pre_fixing.root / locator.file_path);
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (locator.line_span.start < 1 || locator.line_span.end > static_cast<int>(lines.size()))
        raise(Errc::SpanOutOfRange, bug_id + ": buggy function span exceeds " +
                                        locator.file_path);
    std::ostringstream function_source;
    for (int i = locator.line_span.start; i <= locator.line_span.end; ++i) {
        if (i > locator.line_span.start) function_source << '\n';
        function_source << lines[static_cast<std::size_t>(i - 1)];
    }
    ctx.buggy_function_source = function_source.str();

    for (const auto& [test, outcome] :
         adapter.run_tests(pre_fixing, TestSelection::of(manifest.bug.witness_tests), timeout)) {
        if (outcome.is_pass()) continue;
        FailingTest failing;
        failing.test_name = test;
        failing.error_type = outcome.error_type.empty()
                                 ? std::string(outcome_kind_name(outcome.kind))
                                 : outcome.error_type;
        failing.error_message = outcome.message;
        ctx.failing_tests.push_back(std::move(failing));
    }
    if (ctx.failing_tests.empty())
        raise(Errc::InvalidArgument,
              bug_id + ": no witness test fails on the pre-fixing snapshot");

    if (mode == PromptMode::WithBic) {
        Workspace pre_inducing =
            checkout(store, bug_id, SnapshotRole::PreInducing,
                     bug_dir / std::string(role_name(SnapshotRole::PreInducing)));
        Workspace inducing = checkout(store, bug_id, SnapshotRole::Inducing,
                                      bug_dir / std::string(role_name(SnapshotRole::Inducing)));
        FileMap old_tree = load_tree(pre_inducing.root);
        FileMap new_tree = load_tree(inducing.root);
        ChangeSet changes = compute_diff(old_tree, new_tree);
        // Changed-in-BIC is tracked at file granularity; spans do not carry
        // across snapshots.
        ctx.function_changed_in_bic = changes.find(locator.file_path) != nullptr;
        if (ctx.function_changed_in_bic) {
            auto old_it = old_tree.find(locator.file_path);
            auto new_it = new_tree.find(locator.file_path);
            static const std::string kEmpty;
            ctx.bic_diff = render_unified_diff(
                old_it != old_tree.end() ? old_it->second : kEmpty,
                new_it != new_tree.end() ? new_it->second : kEmpty,
                "a/" + locator.file_path, "b/" + locator.file_path);
        }
        ctx.bic_commit_message = manifest.bug.inducing_message;
    }
    return ctx;
}

namespace {

void write_trace_artifacts(const RepairTrace& trace, const fs::path& out_dir) {
    write_json_file(out_dir / ("trace-" + trace.bug_id + ".json"), trace_to_json(trace));

    std::ostringstream jsonl;
    for (const TranscriptRecord& record : trace.transcript) {
        Json line;
        line["attempt"] = record.attempt;
        line["round"] = record.round;
        line["role"] = std::string(role_label(record.role));
        line["content"] = record.content;
        jsonl << line.dump() << "\n";
    }
    write_text_file(out_dir / ("messages-" + trace.bug_id + ".jsonl"), jsonl.str());

    for (const auto& [call_index, diff] : trace.patches)
        write_text_file(out_dir / "patches" / trace.bug_id /
                            ("attempt-" + std::to_string(call_index) + ".patch"),
                        diff);
}

}  // namespace

ExperimentResult run_repair_experiment(const ExperimentConfig& config,
                                       const std::optional<MockScript>& mock,
                                       const fs::path& out_dir) {
    config.validate();
    BugStore store(config.bug_store);
    std::vector<std::string> bug_ids =
        config.bug_filter.empty() ? store.list_bugs() : config.bug_filter;

    fs::create_directories(out_dir);
    fs::path workdir = out_dir / "workspaces";

    RepairOptions options;
    options.strategy = config.strategy;
    options.mode = config.mode;
    options.sampling_size = config.sampling_size;
    options.max_conversation_length = config.max_conversation_length;
    options.full_suite = config.full_suite;
    options.test_timeout =
        std::chrono::duration_cast<std::chrono::milliseconds>(config.test_timeout);
    options.cost_model = config.cost_model;
    options.model = config.model;

    HttpChatGateway http_gateway(config.gateway_concurrency);
    auto adapter = make_default_adapter();

    ExperimentResult result;
    result.traces.resize(bug_ids.size());
    std::vector<std::string> errors(bug_ids.size());
    std::atomic<bool> fatal{false};
    std::string fatal_message;
    std::mutex fatal_mutex;

    auto repair_one = [&](std::size_t index) {
        if (fatal.load()) return;
        const std::string& bug_id = bug_ids[index];
        try {
            // Stale workspaces from a previous run into the same out dir.
            std::error_code ec;
            fs::remove_all(workdir / bug_id, ec);
            BugManifest manifest = store.load(bug_id);
            BugContext ctx = build_bug_context(store, manifest, *adapter, workdir, config.mode,
                                               options.test_timeout);
            Workspace pre_fixing =
                load_workspace(workdir / bug_id / std::string(role_name(SnapshotRole::PreFixing)));
            WorkspacePatchJudge judge(pre_fixing, manifest.bug.buggy_function, *adapter,
                                      manifest.bug.witness_tests, config.full_suite,
                                      options.test_timeout);

            std::unique_ptr<ChatGateway> mock_gateway;
            ChatGateway* gateway = &http_gateway;
            if (mock) {
                mock_gateway = std::make_unique<MockChatGateway>(*mock, bug_id);
                gateway = mock_gateway.get();
            }

            RepairTrace trace =
                config.strategy == RepairStrategy::ZeroShot
                    ? repair_zero_shot(bug_id, ctx, manifest.bug.buggy_function, options,
                                       *gateway, judge)
                    : repair_conversational(bug_id, ctx, manifest.bug.buggy_function, options,
                                            *gateway, judge);
            write_trace_artifacts(trace, out_dir);
            result.traces[index] = std::move(trace);
        } catch (const Error& e) {
            if (e.code() == Errc::AuthFailure) {
                std::lock_guard lock(fatal_mutex);
                fatal = true;
                fatal_message = e.what();
                return;
            }
            errors[index] = e.what();
            result.traces[index].bug_id = bug_id;
            result.traces[index].strategy = config.strategy;
            result.traces[index].mode = config.mode;
        }
    };

    int workers = std::max(1, config.parallelism);
    if (workers == 1) {
        for (std::size_t i = 0; i < bug_ids.size(); ++i) repair_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < bug_ids.size();
                     i = next.fetch_add(1))
                    repair_one(i);
            });
        for (std::thread& t : pool) t.join();
    }
    if (fatal) raise(Errc::AuthFailure, fatal_message);

    std::ostringstream costs;
    costs << "bug_id,calls,prompt_tokens,reply_tokens,cost\n";
    long plausible = 0;
    for (const RepairTrace& trace : result.traces) {
        long prompt_tokens = 0;
        long reply_tokens = 0;
        for (const RepairCall& call : trace.calls) {
            prompt_tokens += call.prompt_tokens;
            reply_tokens += call.reply_tokens;
        }
        costs << trace.bug_id << ',' << trace.calls.size() << ',' << prompt_tokens << ','
              << reply_tokens << ',' << trace.total_cost.to_string() << '\n';
        result.total_cost += trace.total_cost;
        if (trace.plausible_patch) ++plausible;
    }
    result.plausible = plausible;
    write_text_file(out_dir / "costs.csv", costs.str());

    Json summary;
    summary["strategy"] = std::string(strategy_name(config.strategy));
    summary["mode"] = std::string(prompt_mode_name(config.mode));
    summary["model"] = config.model.model_name;
    summary["bugs"] = bug_ids.size();
    summary["plausible"] = plausible;
    summary["exhausted"] = static_cast<long>(bug_ids.size()) - plausible;
    summary["total_cost"] = result.total_cost.to_string();
    Json error_map = Json::object();
    for (std::size_t i = 0; i < bug_ids.size(); ++i)
        if (!errors[i].empty()) error_map[bug_ids[i]] = errors[i];
    summary["errors"] = std::move(error_map);
    write_json_file(out_dir / "run-summary.json", summary);

    return result;
}

}  // namespace regrepair
