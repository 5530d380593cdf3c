// Operator-facing command surface over the regression-repair toolkit:
// bug-store inspection, snapshot checkout/compile/test, the validation
// funnel, change extraction, LLM-driven repair, and reporting.

#include "regrepair/changes.hpp"
#include "regrepair/config.hpp"
#include "regrepair/errors.hpp"
#include "regrepair/experiment.hpp"
#include "regrepair/io.hpp"
#include "regrepair/metrics.hpp"
#include "regrepair/serialize.hpp"
#include "regrepair/validator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace regrepair;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

int cmd_info(const std::string& store_path, const std::string& bug_id) {
    BugStore store(store_path);
    BugManifest manifest = store.load(bug_id);
    const RegressionInstance& bug = manifest.bug;
    std::cout << "bug_id:           " << bug.bug_id << "\n"
              << "project_id:       " << bug.project_id << "\n"
              << "inducing_commit:  " << bug.inducing_commit << "\n"
              << "fixing_commit:    " << bug.fixing_commit << "\n"
              << "fixing_date:      " << bug.fixing_date << "\n"
              << "inducing_message: " << bug.inducing_message << "\n"
              << "fixing_message:   " << bug.fixing_message << "\n"
              << "buggy_function:   " << bug.buggy_function.file_path << ":"
              << bug.buggy_function.line_span.start << ".." << bug.buggy_function.line_span.end
              << " (" << bug.buggy_function.signature << ")\n"
              << "witness_tests:\n";
    for (const std::string& test : bug.witness_tests) std::cout << "  - " << test << "\n";
    return 0;
}

int cmd_env(const std::string& store_path) {
    BugStore store(store_path);
    std::vector<std::string> bugs = store.list_bugs();
    std::cout << "regrepair " << kVersion << "\n"
              << "bug_store: " << fs::absolute(store.root()).string() << "\n"
              << "bugs:      " << bugs.size() << "\n";
    std::size_t fixtures = 0;
    for (const std::string& bug_id : bugs)
        if (fs::exists(store.snapshot_dir(bug_id, SnapshotRole::PreFixing) / "fixture.json"))
            ++fixtures;
    std::cout << "scripted:  " << fixtures << "\n"
              << "command:   " << bugs.size() - fixtures << "\n";
    return 0;
}

int cmd_checkout(const std::string& store_path,
                 const std::string& bug_id,
                 const std::string& role_text,
                 const std::string& dest) {
    BugStore store(store_path);
    Workspace ws = checkout(store, bug_id, role_from_name(role_text), dest);
    std::cout << "checked out " << bug_id << " " << role_name(ws.role) << " -> "
              << ws.root.string() << "\n";
    return 0;
}

int cmd_compile(const std::string& ws_path) {
    Workspace ws = load_workspace(ws_path);
    auto adapter = make_default_adapter();
    CompileResult result = adapter->compile(ws);
    if (result.ok) {
        std::cout << "compile ok\n";
        return 0;
    }
    std::cout << "compile failed: " << result.message << "\n";
    return 1;
}

int cmd_test(const std::string& ws_path,
             const std::vector<std::string>& tests,
             bool all,
             int timeout_s) {
    Workspace ws = load_workspace(ws_path);
    auto adapter = make_default_adapter();
    TestSelection selection = all ? TestSelection::all() : TestSelection::of(tests);
    if (!all && tests.empty()) {
        WorkspaceMeta meta = load_workspace_meta(ws_path);
        selection = TestSelection::of(meta.witness_tests);
    }
    auto outcomes = adapter->run_tests(ws, selection, std::chrono::seconds(timeout_s));
    bool any_failure = false;
    for (const auto& [test, outcome] : outcomes) {
        if (outcome.is_pass()) {
            std::cout << "PASS " << test << "\n";
        } else {
            any_failure = true;
            std::cout << "FAIL " << test;
            if (!outcome.error_type.empty()) std::cout << " " << outcome.error_type;
            if (!outcome.message.empty()) std::cout << ": " << outcome.message;
            if (outcome.error_type.empty() && outcome.message.empty())
                std::cout << " (" << outcome_kind_name(outcome.kind) << ")";
            std::cout << "\n";
        }
    }
    return any_failure ? 1 : 0;
}

int cmd_validate(const std::string& store_path,
                 const std::string& cutoff,
                 const std::string& out_dir,
                 int timeout_s,
                 int parallelism) {
    BugStore store(store_path);
    FunnelOptions options;
    if (!cutoff.empty()) options.date_cutoff = cutoff;
    options.test_timeout = std::chrono::seconds(timeout_s);
    options.parallelism = parallelism;

    fs::path out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    fs::create_directories(out);
    fs::path workdir = out / "funnel-workspaces";

    auto adapter = make_default_adapter();
    FunnelReport report = run_funnel(store, store.list_bugs(), workdir, *adapter, options);
    write_json_file(out / "funnel-report.json", funnel_report_to_json(report));

    std::cout << "input                  " << report.input << "\n"
              << "rejected_date          " << report.rejected_date << "\n"
              << "rejected_executability " << report.rejected_executability << "\n"
              << "rejected_validity      " << report.rejected_validity << "\n"
              << "rejected_utility       " << report.rejected_utility << "\n"
              << "confirmed              " << report.confirmed << "\n";
    return 0;
}

int cmd_extract_changes(const std::string& store_path,
                        const std::string& bug_id,
                        const std::string& out_dir,
                        bool with_coverage) {
    BugStore store(store_path);
    BugManifest manifest = store.load(bug_id);
    fs::path out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    fs::path workdir = out / "workspaces" / bug_id;
    auto adapter = make_default_adapter();

    auto tree_for = [&](SnapshotRole role) {
        fs::path dest = workdir / std::string(role_name(role));
        if (dir_empty_or_absent(dest)) checkout(store, bug_id, role, dest);
        return load_tree(dest);
    };

    FileMap pre_inducing = tree_for(SnapshotRole::PreInducing);
    FileMap inducing = tree_for(SnapshotRole::Inducing);
    FileMap pre_fixing = tree_for(SnapshotRole::PreFixing);
    FileMap fixing = tree_for(SnapshotRole::Fixing);

    ChangeSet inducing_changes = compute_diff(pre_inducing, inducing);
    ChangeSet fixing_changes = compute_diff(pre_fixing, fixing);

    Json json;
    json["bug_id"] = bug_id;
    json["inducing_changes"] = changeset_to_json(inducing_changes);
    json["fixing_changes"] = changeset_to_json(fixing_changes);

    if (with_coverage) {
        // Coverage is collected where the witness tests ran: on the inducing
        // and fixing snapshots. Changed lines are anchored on that side
        // (added/modified lines carry new-version numbers).
        auto minimize = [&](SnapshotRole role, const ChangeSet& changes) -> Json {
            Workspace ws = load_workspace(workdir / std::string(role_name(role)));
            adapter->compile(ws);
            CoverageMap coverage =
                adapter->collect_coverage(ws, manifest.bug.witness_tests);
            MinimizedChangeSet minimized =
                intersect_with_coverage(changes, coverage, CoverageSide::NewLines);
            Json result;
            for (const auto& [file, lines] : minimized) result[file] = lines;
            return result;
        };
        try {
            json["minimized"] = {
                {"inducing", minimize(SnapshotRole::Inducing, inducing_changes)},
                {"fixing", minimize(SnapshotRole::Fixing, fixing_changes)},
            };
        } catch (const Error& e) {
            if (e.code() != Errc::CoverageUnavailable) throw;
            std::cerr << "warning: " << e.what() << "; skipping minimization\n";
        }
    }

    fs::path file = out / ("changes-" + bug_id + ".json");
    write_json_file(file, json);
    std::cout << "wrote " << file.string() << "\n";
    return 0;
}

int cmd_repair(const std::string& config_path,
               const std::string& mock_path,
               const std::string& out_dir) {
    ExperimentConfig config = load_experiment_config(config_path);
    std::optional<MockScript> mock;
    if (!mock_path.empty()) mock = MockScript::load(mock_path);
    fs::path out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);

    ExperimentResult result = run_repair_experiment(config, mock, out);
    std::cout << "bugs:       " << result.traces.size() << "\n"
              << "plausible:  " << result.plausible << "\n"
              << "total_cost: " << result.total_cost.to_string() << "\n"
              << "artifacts:  " << out.string() << "\n";
    return 0;
}

int cmd_stats(const std::string& store_path,
              const std::string& annotations_path,
              const std::string& out_dir) {
    BugStore store(store_path);
    std::vector<OperatorAnnotation> annotations;
    if (!annotations_path.empty())
        annotations = operator_annotations_from_json(read_json_file(annotations_path));
    std::map<std::string, const OperatorAnnotation*> by_bug;
    for (const OperatorAnnotation& annotation : annotations)
        by_bug[annotation.bug_id] = &annotation;

    fs::path out = out_dir.empty() ? fs::path("out") : fs::path(out_dir);
    fs::create_directories(out);

    std::ostringstream per_bug;
    per_bug << "bug_id,added,removed,modified,patch_size,chunks,files,methods\n";
    std::vector<long> added, removed, modified, sizes, chunks, files, methods;
    for (const std::string& bug_id : store.list_bugs()) {
        FileMap old_tree = load_tree(store.snapshot_dir(bug_id, SnapshotRole::PreFixing));
        FileMap new_tree = load_tree(store.snapshot_dir(bug_id, SnapshotRole::Fixing));
        ChangeSet changes = compute_diff(old_tree, new_tree);
        std::optional<long> bug_methods;
        auto it = by_bug.find(bug_id);
        if (it != by_bug.end()) bug_methods = it->second->methods_modified;
        PatchStats stats = patch_stats(changes, bug_methods);
        per_bug << bug_id << ',' << stats.added << ',' << stats.removed << ','
                << stats.modified << ',' << stats.patch_size << ',' << stats.chunks << ','
                << stats.files << ','
                << (stats.methods ? std::to_string(*stats.methods) : std::string()) << '\n';
        added.push_back(stats.added);
        removed.push_back(stats.removed);
        modified.push_back(stats.modified);
        sizes.push_back(stats.patch_size);
        chunks.push_back(stats.chunks);
        files.push_back(stats.files);
        if (stats.methods) methods.push_back(*stats.methods);
    }
    write_text_file(out / "patch-stats.csv", per_bug.str());

    std::ostringstream quantiles;
    quantiles << "metric,min,p25,p50,p75,p90,p95,max\n";
    auto row = [&](const char* name, const std::vector<long>& values) {
        if (values.empty()) return;
        quantiles << name;
        quantiles << ',' << *std::min_element(values.begin(), values.end());
        for (int p : {25, 50, 75, 90, 95})
            quantiles << ',' << nearest_rank_percentile(values, p);
        quantiles << ',' << *std::max_element(values.begin(), values.end()) << '\n';
    };
    row("added", added);
    row("removed", removed);
    row("modified", modified);
    row("patch_size", sizes);
    row("chunks", chunks);
    row("files", files);
    row("methods", methods);
    write_text_file(out / "patch-stats-quantiles.csv", quantiles.str());

    if (!annotations.empty()) {
        OperatorDistribution distribution = aggregate_operators(annotations);
        std::ostringstream operators;
        operators << "operator,total,local,remote,unmask\n";
        for (const auto& [label, total] : distribution.total) {
            operators << label << ',' << total;
            for (BugCategory category :
                 {BugCategory::Local, BugCategory::Remote, BugCategory::Unmask}) {
                auto cat_it = distribution.by_category.find(category);
                long count = 0;
                if (cat_it != distribution.by_category.end()) {
                    auto label_it = cat_it->second.find(label);
                    if (label_it != cat_it->second.end()) count = label_it->second;
                }
                operators << ',' << count;
            }
            operators << '\n';
        }
        write_text_file(out / "operator-distribution.csv", operators.str());

        std::ostringstream per_patch;
        per_patch << "operators,patches\n";
        for (const auto& [count, patches] : distribution.operators_per_patch)
            per_patch << count << ',' << patches << '\n';
        write_text_file(out / "operators-per-patch.csv", per_patch.str());
    }
    std::cout << "wrote stats under " << out.string() << "\n";
    return 0;
}

struct RunSpec {
    std::string label;
    std::string traces_dir;
    std::string annotations;
};

RunSpec parse_run_spec(const std::string& text) {
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        raise(Errc::InvalidArgument,
              "run spec must be label=<traces_dir>[,<annotations.json>]: " + text);
    RunSpec spec;
    spec.label = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos) {
        spec.traces_dir = rest;
    } else {
        spec.traces_dir = rest.substr(0, comma);
        spec.annotations = rest.substr(comma + 1);
    }
    return spec;
}

int cmd_report(const std::vector<std::string>& run_specs,
               long dataset_size,
               const std::string& out_dir,
               const std::string& format_text) {
    std::vector<RepairSummary> summaries;
    std::vector<std::vector<CorrectnessAnnotation>> annotation_sets;
    for (const std::string& text : run_specs) {
        RunSpec spec = parse_run_spec(text);
        std::vector<RepairTrace> traces;
        for (const auto& entry : fs::directory_iterator(spec.traces_dir)) {
            std::string name = entry.path().filename().string();
            if (name.rfind("trace-", 0) == 0 && entry.path().extension() == ".json")
                traces.push_back(trace_from_json(read_json_file(entry.path())));
        }
        std::vector<CorrectnessAnnotation> annotations;
        if (!spec.annotations.empty())
            annotations = annotations_from_json(read_json_file(spec.annotations));
        summaries.push_back(summarize(spec.label, traces, annotations, dataset_size));
        annotation_sets.push_back(std::move(annotations));
    }

    ReportFormat format = format_text == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv;
    std::string report = render_report(summaries, format);
    if (!out_dir.empty()) {
        fs::path out(out_dir);
        fs::create_directories(out);
        fs::path file = out / (format == ReportFormat::Csv ? "summary.csv" : "summary.md");
        write_text_file(file, report);
        std::cout << "wrote " << file.string() << "\n";
    } else {
        std::cout << report;
    }
    if (summaries.size() > 1) {
        std::set<std::string> united = union_correct_bugs(annotation_sets);
        std::cout << "union_correct: " << united.size() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regression bug benchmark harness and LLM repair driver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string store_path;
    std::string bug_id;
    std::string role_text;
    std::string dest;
    std::string ws_path;
    std::vector<std::string> tests;
    bool all_tests = false;
    int timeout_s = 300;
    std::string cutoff;
    std::string out_dir;
    int parallelism = 1;
    std::string config_path;
    std::string mock_path;
    std::string annotations_path;
    bool with_coverage = false;
    std::vector<std::string> run_specs;
    long dataset_size = 0;
    std::string format_text = "csv";

    auto* info = app.add_subcommand("info", "Print a bug's manifest");
    info->add_option("bug_id", bug_id)->required();
    info->add_option("--store", store_path, "Bug store directory")->required();

    auto* env = app.add_subcommand("env", "Summarize the bug store");
    env->add_option("--store", store_path)->required();

    auto* co = app.add_subcommand("checkout", "Materialize one snapshot");
    co->add_option("bug_id", bug_id)->required();
    co->add_option("role", role_text, "pre-inducing|inducing|pre-fixing|fixing")->required();
    co->add_option("dest", dest)->required();
    co->add_option("--store", store_path)->required();

    auto* compile = app.add_subcommand("compile", "Compile a checked-out workspace");
    compile->add_option("workspace", ws_path)->required();

    auto* test = app.add_subcommand("test", "Run tests in a workspace");
    test->add_option("workspace", ws_path)->required();
    test->add_option("--tests", tests, "Test ids (default: the witness tests)");
    test->add_flag("--all", all_tests, "Run the full suite");
    test->add_option("--timeout", timeout_s, "Per-invocation timeout in seconds");

    auto* validate = app.add_subcommand("validate", "Run the validation funnel over the store");
    validate->add_option("--store", store_path)->required();
    validate->add_option("--cutoff", cutoff, "Reject fixing commits before this date");
    validate->add_option("--out", out_dir, "Artifact directory (default out/)");
    validate->add_option("--timeout", timeout_s);
    validate->add_option("--parallelism", parallelism);

    auto* extract = app.add_subcommand("extract-changes",
                                       "Diff the inducing/fixing commits of a bug");
    extract->add_option("bug_id", bug_id)->required();
    extract->add_option("--store", store_path)->required();
    extract->add_option("--out", out_dir);
    extract->add_flag("--coverage", with_coverage, "Minimize changes by witness coverage");

    auto* repair = app.add_subcommand("repair", "Run an LLM repair experiment");
    repair->add_option("--config", config_path)->required();
    repair->add_option("--mock", mock_path, "Mock-gateway script file (hermetic run)");
    repair->add_option("--out", out_dir);

    auto* stats = app.add_subcommand("stats", "Patch size/scope statistics and operators");
    stats->add_option("--store", store_path)->required();
    stats->add_option("--annotations", annotations_path, "operators.json");
    stats->add_option("--out", out_dir);

    auto* report = app.add_subcommand("report", "Aggregate traces into a summary table");
    report->add_option("--run", run_specs, "label=<traces_dir>[,<annotations.json>]")
        ->required();
    report->add_option("--dataset-size", dataset_size)->required();
    report->add_option("--out", out_dir);
    report->add_option("--format", format_text)->check(CLI::IsMember({"csv", "markdown"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*info) return cmd_info(store_path, bug_id);
        if (*env) return cmd_env(store_path);
        if (*co) return cmd_checkout(store_path, bug_id, role_text, dest);
        if (*compile) return cmd_compile(ws_path);
        if (*test) return cmd_test(ws_path, tests, all_tests, timeout_s);
        if (*validate)
            return cmd_validate(store_path, cutoff, out_dir, timeout_s, parallelism);
        if (*extract)
            return cmd_extract_changes(store_path, bug_id, out_dir, with_coverage);
        if (*repair) return cmd_repair(config_path, mock_path, out_dir);
        if (*stats) return cmd_stats(store_path, annotations_path, out_dir);
        if (*report) return cmd_report(run_specs, dataset_size, out_dir, format_text);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
