// Acceptance suite: one check per shipped guarantee, each printed as a
// PASS/FAIL line with its runtime. Everything runs hermetically against
// scripted fixtures and the mock gateway.

#include "regrepair/changes.hpp"
#include "regrepair/errors.hpp"
#include "regrepair/gateway.hpp"
#include "regrepair/io.hpp"
#include "regrepair/metrics.hpp"
#include "regrepair/model.hpp"
#include "regrepair/prompting.hpp"
#include "regrepair/repair.hpp"
#include "regrepair/serialize.hpp"
#include "regrepair/subprocess.hpp"
#include "regrepair/validator.hpp"

#include "testutil.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace regrepair;
using testutil::TempDir;

namespace {

int g_failures = 0;

void check(bool condition, const std::string& what) {
    if (!condition) {
        ++g_failures;
        std::cout << "    assertion failed: " << what << "\n";
    }
}

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    int failures_before = g_failures;
    auto start = std::chrono::steady_clock::now();
    try {
        body();
    } catch (const std::exception& e) {
        ++g_failures;
        std::cout << "    exception: " << e.what() << "\n";
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    std::cout << (g_failures == failures_before ? "PASS" : "FAIL") << " " << number << ". "
              << title << " (" << elapsed.count() << " ms)\n";
}

std::filesystem::path source_dir() {
    return std::filesystem::path(REGREPAIR_TEST_SOURCE_DIR);
}

// --- 1: regression predicate ------------------------------------------------

OutcomeMatrix matrix_for_pattern(const std::string& pattern) {
    OutcomeMatrix matrix;
    matrix.witness_tests = {"t1"};
    for (int i = 0; i < 4; ++i) {
        SnapshotRole role = kAllRoles[static_cast<std::size_t>(i)];
        matrix.compile_status[role] = CompileResult{true, ""};
        TestOutcome outcome = pattern[static_cast<std::size_t>(i)] == 'P'
                                  ? TestOutcome::pass()
                                  : TestOutcome::functional_fail("org.junit.AssertionError",
                                                                 "observed failure");
        matrix.outcomes[role] = {{"t1", outcome}};
    }
    return matrix;
}

void criterion_regression_predicate() {
    int accepted = 0;
    std::string accepted_pattern;
    for (int bits = 0; bits < 16; ++bits) {
        std::string pattern;
        for (int i = 0; i < 4; ++i) pattern += (bits >> i) & 1 ? 'F' : 'P';
        if (is_regression(matrix_for_pattern(pattern))) {
            ++accepted;
            accepted_pattern = pattern;
        }
    }
    check(accepted == 1, "exactly one accepted pass/fail pattern");
    check(accepted_pattern == "PFFP", "accepted pattern is pass-fail-fail-pass");
}

// --- 2: funnel accounting ----------------------------------------------------

void criterion_funnel_counts() {
    {
        TempDir tmp;
        std::filesystem::path store_dir = tmp.path() / "store";
        testutil::FixtureBugOptions date_reject;
        date_reject.fixing_date = "2016-11-02";
        date_reject.manifest_only = true;
        testutil::make_fixture_bug(store_dir, "bug-1-date", date_reject);
        testutil::FixtureBugOptions exec_reject;
        exec_reject.compile_fail_role = SnapshotRole::PreInducing;
        testutil::make_fixture_bug(store_dir, "bug-2-exec", exec_reject);
        testutil::FixtureBugOptions validity_reject;
        validity_reject.witness_pattern = "PPPP";
        testutil::make_fixture_bug(store_dir, "bug-3-validity", validity_reject);
        testutil::FixtureBugOptions utility_reject;
        utility_reject.extra_failing_on_prefixing = true;
        testutil::make_fixture_bug(store_dir, "bug-4-utility", utility_reject);
        testutil::make_fixture_bug(store_dir, "bug-5-ok");
        testutil::make_fixture_bug(store_dir, "bug-6-ok");

        BugStore store(store_dir);
        auto adapter = make_default_adapter();
        FunnelOptions options;
        options.date_cutoff = "2017-06-01";
        FunnelReport report =
            run_funnel(store, store.list_bugs(), tmp.path() / "work", *adapter, options);
        check(report.input == 6, "six-bug store: input 6");
        check(report.rejected_date == 1, "six-bug store: 1 date reject");
        check(report.rejected_executability == 1, "six-bug store: 1 executability reject");
        check(report.rejected_validity == 1, "six-bug store: 1 validity reject");
        check(report.rejected_utility == 1, "six-bug store: 1 utility reject");
        check(report.confirmed == 2, "six-bug store: 2 confirmed");
    }
    {
        TempDir tmp;
        std::filesystem::path store_dir = tmp.path() / "store";
        int next = 0;
        auto add = [&](const testutil::FixtureBugOptions& options, int count) {
            for (int i = 0; i < count; ++i) {
                std::ostringstream id;
                id << "cand-" << std::setw(4) << std::setfill('0') << next++;
                testutil::make_fixture_bug(store_dir, id.str(), options);
            }
        };
        testutil::FixtureBugOptions date_reject;
        date_reject.fixing_date = "2016-05-20";
        date_reject.manifest_only = true;
        add(date_reject, 711);
        testutil::FixtureBugOptions exec_reject;
        exec_reject.compile_fail_role = SnapshotRole::Inducing;
        add(exec_reject, 179);
        testutil::FixtureBugOptions validity_reject;
        validity_reject.witness_pattern = "PPPP";
        add(validity_reject, 223);
        testutil::FixtureBugOptions utility_reject;
        utility_reject.extra_failing_on_prefixing = true;
        add(utility_reject, 62);
        add(testutil::FixtureBugOptions{}, 99);

        BugStore store(store_dir);
        auto adapter = make_default_adapter();
        FunnelOptions options;
        options.date_cutoff = "2017-06-01";
        options.parallelism = 4;
        FunnelReport report =
            run_funnel(store, store.list_bugs(), tmp.path() / "work", *adapter, options);
        check(report.input == 1274, "corpus: 1274 mined candidates");
        check(report.input - report.rejected_date == 563, "corpus: 563 past the date filter");
        check(report.input - report.rejected_date - report.rejected_executability == 384,
              "corpus: 384 executable");
        check(report.confirmed + report.rejected_utility == 161, "corpus: 161 valid regressions");
        check(report.confirmed == 99, "corpus: 99 confirmed");
    }
}

// --- 3: coverage intersection ------------------------------------------------

std::string random_file(std::mt19937& rng, int max_lines) {
    std::uniform_int_distribution<int> line_count(0, max_lines);
    std::uniform_int_distribution<int> word(0, 9);
    std::bernoulli_distribution final_newline(0.9);
    int n = line_count(rng);
    std::ostringstream out;
    for (int i = 0; i < n; ++i) {
        out << "line-" << word(rng);
        if (i + 1 < n || final_newline(rng)) out << "\n";
    }
    return out.str();
}

void criterion_coverage_intersection() {
    std::mt19937 rng(20240601);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int round = 0; round < 1000; ++round) {
        FileMap old_tree{{"f", random_file(rng, 12)}};
        FileMap new_tree{{"f", random_file(rng, 12)}};
        ChangeSet changes = compute_diff(old_tree, new_tree);

        CoverageMap coverage;
        for (int line = 1; line <= 14; ++line)
            if (coin(rng)) coverage["f"].insert(line);

        MinimizedChangeSet minimized =
            intersect_with_coverage(changes, coverage, CoverageSide::NewLines);

        std::set<int> changed;
        for (const FileChanges& file : changes.files)
            for (const Hunk& hunk : file.hunks)
                for (const LineEdit& edit : hunk.edits)
                    if (edit.new_line &&
                        (edit.kind == EditKind::Added || edit.kind == EditKind::Modified))
                        changed.insert(*edit.new_line);
        std::set<int> expected;
        for (int line : changed)
            if (coverage.count("f") != 0 && coverage.at("f").contains(line))
                expected.insert(line);
        std::set<int> actual = minimized.count("f") ? minimized.at("f") : std::set<int>{};
        if (actual != expected) {
            check(false, "round " + std::to_string(round) + ": intersection oracle mismatch");
            return;
        }

        // Monotone in coverage: a superset of covered lines never shrinks R.
        CoverageMap larger = coverage;
        larger["f"].insert(15);
        MinimizedChangeSet grown =
            intersect_with_coverage(changes, larger, CoverageSide::NewLines);
        for (int line : actual)
            if (!grown.at("f").contains(line)) {
                check(false, "monotonicity violated at round " + std::to_string(round));
                return;
            }
    }
    check(true, "coverage oracle");
}

// --- 4: diff replay ------------------------------------------------------------

void criterion_diff_replay() {
    std::mt19937 rng(777);
    for (int round = 0; round < 500; ++round) {
        std::string old_content = random_file(rng, 16);
        std::string new_content = random_file(rng, 16);
        ChangeSet changes =
            compute_diff(FileMap{{"f", old_content}}, FileMap{{"f", new_content}});
        std::string replayed = old_content;
        if (const FileChanges* fc = changes.find("f"))
            replayed = apply_changes(old_content, *fc);
        if (replayed != new_content) {
            check(false, "replay mismatch at round " + std::to_string(round));
            return;
        }
        PatchStats stats = patch_stats(changes);
        if (stats.patch_size != stats.added + stats.removed + stats.modified) {
            check(false, "patch_size identity violated at round " + std::to_string(round));
            return;
        }
    }
    check(true, "diff replay");
}

// --- 5: metrics reproduction ---------------------------------------------------

void criterion_metrics_rows() {
    struct Row {
        const char* label;
        long plausible;
        long correct;
        const char* pr;
        const char* cr;
        const char* precision;
    };
    const Row rows[] = {
        // Prompt-based and fine-tuning-based methods over the 99-bug dataset.
        {"chatgpt-4o conversation", 33, 9, "33.33%", "9.09%", "27.27%"},
        {"chatgpt-4o zero-shot", 20, 7, "20.20%", "7.07%", "35.00%"},
        {"chatgpt-3.5 conversation", 22, 5, "22.22%", "5.05%", "22.73%"},
        {"chatgpt-3.5 zero-shot", 15, 5, "15.15%", "5.05%", "33.33%"},
        {"repairllama", 19, 9, "19.19%", "9.09%", "47.37%"},
        {"incoder-6b", 10, 3, "10.10%", "3.03%", "30.00%"},
        {"incoder-1b", 9, 3, "9.09%", "3.03%", "33.33%"},
        {"codegen-6b", 6, 1, "6.06%", "1.01%", "16.67%"},
        {"codegen-2b", 6, 1, "6.06%", "1.01%", "16.67%"},
        {"tbar", 0, 0, "0.00%", "0.00%", "N/A"},
        {"jgenprog", 0, 0, "0.00%", "0.00%", "N/A"},
        {"cardumen", 0, 0, "0.00%", "0.00%", "N/A"},
        {"jkali", 0, 0, "0.00%", "0.00%", "N/A"},
        {"arja", 0, 0, "0.00%", "0.00%", "N/A"},
        {"jmutrepair", 0, 0, "0.00%", "0.00%", "N/A"},
        // Context-augmented variants.
        {"chatgpt-4o zero-shot bic", 33, 12, "33.33%", "12.12%", "36.36%"},
        {"chatgpt-4o conversation bic", 43, 16, "43.43%", "16.16%", "37.21%"},
        {"chatgpt-3.5 zero-shot bic", 20, 7, "20.20%", "7.07%", "35.00%"},
        {"chatgpt-3.5 conversation bic", 33, 8, "33.33%", "8.08%", "24.24%"},
    };
    for (const Row& row : rows) {
        RepairSummary summary =
            RepairSummary::from_counts(row.label, row.plausible, row.correct, 99);
        check(summary.pr_percent() == row.pr,
              std::string(row.label) + " PR " + summary.pr_percent() + " != " + row.pr);
        check(summary.cr_percent() == row.cr,
              std::string(row.label) + " CR " + summary.cr_percent() + " != " + row.cr);
        check(summary.precision_percent() == row.precision,
              std::string(row.label) + " P " + summary.precision_percent() + " != " +
                  row.precision);
    }
}

// --- 6: prompt goldens -----------------------------------------------------------

void criterion_prompt_goldens() {
    auto golden = [&](const std::string& name) {
        return read_text_file(source_dir() / "golden" / name);
    };
    BugContext ctx = testutil::golden_bug_context();

    Conversation baseline =
        build_initial_prompt(ctx, PromptMode::Baseline, RepairStrategy::ZeroShot);
    check(baseline.messages[0].content == "You are an Automated Program Repair Tool",
          "system role string");
    check(baseline.messages[0].content == golden("system.golden"), "system golden");
    check(baseline.messages[1].content == golden("prompt_baseline.golden"), "baseline golden");
    check(baseline.messages[1].content.find("Let's think step by step to fix the bug") !=
              std::string::npos,
          "baseline chain-of-thought line");

    Conversation changed =
        build_initial_prompt(ctx, PromptMode::WithBic, RepairStrategy::Conversational);
    check(changed.messages[1].content == golden("prompt_bic_changed.golden"),
          "bic-changed golden");

    BugContext unchanged_ctx = ctx;
    unchanged_ctx.function_changed_in_bic = false;
    unchanged_ctx.bic_diff.reset();
    Conversation unchanged =
        build_initial_prompt(unchanged_ctx, PromptMode::WithBic, RepairStrategy::Conversational);
    check(unchanged.messages[1].content == golden("prompt_bic_unchanged.golden"),
          "bic-unchanged golden");

    Message compile = build_feedback(RepairVerdict::compilation_error("cannot find symbol x"));
    check(compile.content == golden("feedback_compile.golden"), "compile feedback golden");
    check(compile.content.rfind("The fixed version is not compilable", 0) == 0,
          "compile feedback opening");
    check(build_feedback(RepairVerdict::functional_error(
                             "com.example.text.ClampTest#returnsValueInsideRange: "
                             "org.junit.ComparisonFailure: expected:<[6]> but was:<[1]>"))
                  .content == golden("feedback_functional.golden"),
          "functional feedback golden");
    check(build_feedback(RepairVerdict::no_response_code()).content ==
              golden("feedback_nocode.golden"),
          "no-code feedback golden");
    check(build_feedback(RepairVerdict::timeout()).content == golden("feedback_timeout.golden"),
          "timeout feedback golden");
}

// --- 7: conversational loop semantics ---------------------------------------------

BugContext loop_context() {
    BugContext ctx;
    ctx.buggy_function_source = "int add(int a, int b) {\n    return a - b;\n}";
    ctx.failing_tests.push_back(
        {"CalcTest#addsSmallNumbers", "org.junit.ComparisonFailure", "expected:<3> but was:<-1>"});
    return ctx;
}

RepairOptions loop_options() {
    RepairOptions options;
    options.strategy = RepairStrategy::Conversational;
    options.mode = PromptMode::Baseline;
    options.cost_model = {Decimal::parse("0.0025"), Decimal::parse("0.01")};
    options.model.model_name = "mock";
    return options;
}

const FunctionLocator kLoopTarget{"src/calc.txt", "int add(int a, int b)", {3, 6}};

MockScript one_code_reply(const std::string& bug_id) {
    MockScript script;
    script.replies[bug_id] = {"Attempt.\n```\nint add(int a, int b) { return 0; }\n```\n"};
    return script;
}

void criterion_conversation_loop() {
    {
        MockScript script;
        script.replies["bug-a"] = {
            "```\nint add(int a, int b) { BROKEN }\n```\n",
            "```\nint add(int a, int b) { return a + b; }\n```\n",
        };
        MockChatGateway gateway(script, "bug-a");
        testutil::ScriptedJudge judge({RepairVerdict::compilation_error("cannot find symbol"),
                                       RepairVerdict::plausible()});
        RepairTrace trace = repair_conversational("bug-a", loop_context(), kLoopTarget,
                                                  loop_options(), gateway, judge);
        check(trace.calls.size() == 2, "compile-fail script: 2 calls");
        check(trace.plausible_patch.has_value(), "compile-fail script ends plausible");
        int feedbacks = 0;
        std::string expected =
            build_feedback(RepairVerdict::compilation_error("cannot find symbol")).content;
        for (const TranscriptRecord& record : trace.transcript)
            if (record.role == Role::User && record.content == expected) ++feedbacks;
        check(feedbacks == 1, "exactly one compilation feedback message");
    }
    {
        MockChatGateway gateway(one_code_reply("bug-b"), "bug-b");
        testutil::ScriptedJudge judge({RepairVerdict::functional_error("wrong output")});
        RepairTrace trace = repair_conversational("bug-b", loop_context(), kLoopTarget,
                                                  loop_options(), gateway, judge);
        check(trace.calls.size() == 10, "always-fail script: 10 calls");
        bool split_ok = true;
        for (std::size_t i = 0; i < trace.calls.size(); ++i) {
            split_ok = split_ok && trace.calls[i].attempt == static_cast<int>(i / 5) + 1 &&
                       trace.calls[i].round == static_cast<int>(i % 5) + 1;
        }
        check(split_ok, "two conversations of five rounds");

        std::vector<const TranscriptRecord*> starts[3];
        for (const TranscriptRecord& record : trace.transcript)
            if (record.round == 1 && record.role != Role::Assistant &&
                record.attempt >= 1 && record.attempt <= 2)
                starts[record.attempt].push_back(&record);
        bool restart_identical = starts[1].size() >= 2 && starts[2].size() >= 2 &&
                                 starts[1][0]->content == starts[2][0]->content &&
                                 starts[1][1]->content == starts[2][1]->content;
        check(restart_identical, "restart prompt byte-identical to attempt 1");
    }
    {
        std::mt19937 rng(4242);
        std::uniform_int_distribution<int> pick(0, 3);
        bool budget_ok = true;
        for (int round = 0; round < 200; ++round) {
            std::vector<RepairVerdict> verdicts;
            for (int i = 0; i < 12; ++i) {
                switch (pick(rng)) {
                    case 0: verdicts.push_back(RepairVerdict::compilation_error("c")); break;
                    case 1: verdicts.push_back(RepairVerdict::functional_error("f")); break;
                    case 2: verdicts.push_back(RepairVerdict::timeout()); break;
                    default: verdicts.push_back(RepairVerdict::plausible()); break;
                }
            }
            MockChatGateway gateway(one_code_reply("bug-c"), "bug-c");
            testutil::ScriptedJudge judge(verdicts);
            RepairTrace trace = repair_conversational("bug-c", loop_context(), kLoopTarget,
                                                      loop_options(), gateway, judge);
            budget_ok = budget_ok && trace.calls.size() <= 10;
        }
        check(budget_ok, "budget never exceeds 10 calls over 200 random scripts");
    }
}

// --- 8: cost accounting --------------------------------------------------------

void criterion_cost_accounting() {
    CostModel gpt4o{Decimal::parse("0.0025"), Decimal::parse("0.01")};
    check(estimate_cost(1000, 1000, gpt4o).to_string() == "0.0125",
          "(1000, 1000) at 0.0025/0.01 costs 0.0125");

    std::mt19937 rng(9090);
    std::uniform_int_distribution<long> tokens(0, 5'000'000);
    bool linear = true;
    for (int i = 0; i < 500; ++i) {
        long a_in = tokens(rng), a_out = tokens(rng), b_in = tokens(rng), b_out = tokens(rng);
        linear = linear && estimate_cost(a_in + b_in, a_out + b_out, gpt4o) ==
                               estimate_cost(a_in, a_out, gpt4o) +
                                   estimate_cost(b_in, b_out, gpt4o);
    }
    check(linear, "estimate_cost is linear on 500 random inputs");

    // Per-run total equals an independent summation over the trace file.
    MockChatGateway gateway(one_code_reply("bug-cost"), "bug-cost");
    testutil::ScriptedJudge judge({RepairVerdict::functional_error("f")});
    RepairOptions options = loop_options();
    RepairTrace trace = repair_conversational("bug-cost", loop_context(), kLoopTarget, options,
                                              gateway, judge);
    Json json = trace_to_json(trace);
    Decimal recomputed;
    for (const Json& call : json.at("calls"))
        recomputed += estimate_cost(call.at("prompt_tokens").get<long>(),
                                    call.at("reply_tokens").get<long>(), options.cost_model);
    check(recomputed.to_string() == json.at("total_cost").get<std::string>(),
          "trace total equals independent summation");
}

// --- 9: end-to-end hermetic repair -----------------------------------------------

void criterion_end_to_end() {
    const char* cli = REGREPAIR_CLI_PATH;
    TempDir tmp;
    testutil::make_command_bug(tmp.path() / "store", "RegressionBug-7");

    Json config;
    config["bug_store"] = (tmp.path() / "store").string();
    config["model"] = {{"model_name", "mock-model"}, {"endpoint", "http://unused.invalid"}};
    config["cost_model"] = {{"input_price_per_1k", "0.0025"}, {"output_price_per_1k", "0.01"}};
    config["strategy"] = "conversational";
    config["mode"] = "with-bic";
    config["test_timeout_s"] = 60;
    write_json_file(tmp.path() / "config.json", config);

    Json mock;
    mock["replies"] = {
        {"RegressionBug-7",
         {"Try this.\n```\nint add(int a, int b) {\n    int oops = COMPILE_BREAK;\n    return "
          "oops;\n}\n```\n",
          "Reverting to the previous correct statement.\n```\nint add(int a, int b) {\n    "
          "return a + b;\n}\n```\n"}}};
    write_json_file(tmp.path() / "mock.json", mock);

    auto run_once = [&](const std::string& out) {
        RunResult run = run_shell(std::string(cli) +
                                      " repair --config config.json --mock mock.json --out " + out,
                                  tmp.path(), std::chrono::seconds(60));
        check(run.exit_code == 0, "repair --mock exits 0 (" + out + "): " + run.output);
    };
    run_once("run1");
    run_once("run2");

    std::string trace1 = read_text_file(tmp.path() / "run1" / "trace-RegressionBug-7.json");
    std::string trace2 = read_text_file(tmp.path() / "run2" / "trace-RegressionBug-7.json");
    check(trace1 == trace2, "two runs produce byte-identical traces");
    std::string messages1 = read_text_file(tmp.path() / "run1" / "messages-RegressionBug-7.jsonl");
    std::string messages2 = read_text_file(tmp.path() / "run2" / "messages-RegressionBug-7.jsonl");
    check(messages1 == messages2, "two runs produce byte-identical transcripts");

    Json trace = read_json_file(tmp.path() / "run1" / "trace-RegressionBug-7.json");
    check(trace.at("final") == "plausible", "mock repair ends plausible");
    check(trace.at("calls").size() == 2, "mock repair takes two calls");

    std::string patch_text = read_text_file(tmp.path() / "run1" / "patches" / "RegressionBug-7" /
                                            "attempt-2.patch");
    check(patch_text.find("--- a/src/calc.txt") != std::string::npos, "unified diff header");
    check(patch_text.find("+    return a + b;") != std::string::npos, "unified diff payload");

    // Applying the winning candidate through apply_patch must validate as
    // plausible on a fresh checkout.
    BugStore store(tmp.path() / "store");
    BugManifest manifest = store.load("RegressionBug-7");
    Workspace ws =
        checkout(store, "RegressionBug-7", SnapshotRole::PreFixing, tmp.path() / "verify-ws");
    PatchCandidate candidate{
        trace.at("plausible_patch").at("function_source").get<std::string>(),
        PatchCandidate::Extraction::FencedBlock, ""};
    auto adapter = make_default_adapter();
    PatchedWorkspace pws = apply_patch(ws, manifest.bug.buggy_function, candidate);
    RepairVerdict verdict = validate_patch(pws, *adapter, manifest.bug.witness_tests, true,
                                           std::chrono::seconds(30));
    check(verdict.is_plausible(), "extracted patch validates as plausible via apply_patch");
}

// --- 10: patch statistics quantiles ------------------------------------------------

void criterion_patch_stats_quantiles() {
    std::vector<long> sizes;
    auto fill = [&](std::vector<long>& v, long value, int count) {
        for (int i = 0; i < count; ++i) v.push_back(value);
    };
    fill(sizes, 1, 25);
    fill(sizes, 2, 12);
    fill(sizes, 3, 12);
    fill(sizes, 4, 1);
    fill(sizes, 5, 6);
    fill(sizes, 6, 6);
    fill(sizes, 8, 4);
    fill(sizes, 10, 4);
    fill(sizes, 12, 4);
    fill(sizes, 13, 1);
    fill(sizes, 15, 5);
    fill(sizes, 20, 4);
    fill(sizes, 30, 5);
    fill(sizes, 33, 1);
    sizes.insert(sizes.end(), {40, 50, 60, 80});
    fill(sizes, 92, 1);
    sizes.insert(sizes.end(), {100, 150, 200, 230, 256});
    check(sizes.size() == 100, "patch-size corpus has 100 bugs");
    check(nearest_rank_percentile(sizes, 25) == 1, "patch size p25 = 1");
    check(nearest_rank_percentile(sizes, 50) == 4, "patch size median = 4");
    check(nearest_rank_percentile(sizes, 75) == 13, "patch size p75 = 13");
    check(nearest_rank_percentile(sizes, 90) == 33, "patch size p90 = 33");
    check(nearest_rank_percentile(sizes, 95) == 92, "patch size p95 = 92");
    check(*std::max_element(sizes.begin(), sizes.end()) == 256, "patch size max = 256");
    check(*std::min_element(sizes.begin(), sizes.end()) == 1, "patch size min = 1");

    std::vector<long> chunks;
    fill(chunks, 1, 51);
    fill(chunks, 2, 12);
    fill(chunks, 3, 12);
    fill(chunks, 5, 7);
    fill(chunks, 9, 7);
    fill(chunks, 10, 1);
    chunks.insert(chunks.end(), {15, 20, 25, 30});
    fill(chunks, 31, 1);
    chunks.insert(chunks.end(), {40, 60, 80, 90, 93});
    check(chunks.size() == 100, "chunk corpus has 100 bugs");
    check(nearest_rank_percentile(chunks, 50) == 1, "chunks median = 1");
    check(nearest_rank_percentile(chunks, 75) == 3, "chunks p75 = 3");
    check(nearest_rank_percentile(chunks, 90) == 10, "chunks p90 = 10");
    check(nearest_rank_percentile(chunks, 95) == 31, "chunks p95 = 31");
    check(*std::max_element(chunks.begin(), chunks.end()) == 93, "chunks max = 93");
}

}  // namespace

int main() {
    criterion(1, "regression predicate: exhaustive 16-pattern check",
              criterion_regression_predicate);
    criterion(2, "funnel accounting: 6-bug store and 1274->563->384->161->99 corpus",
              criterion_funnel_counts);
    criterion(3, "coverage intersection: 1000-case set oracle with monotonicity",
              criterion_coverage_intersection);
    criterion(4, "diff replay: 500 random pairs reproduce files byte-exactly",
              criterion_diff_replay);
    criterion(5, "metrics: every summary row reproduces its PR/CR/P strings",
              criterion_metrics_rows);
    criterion(6, "prompt goldens: prompts and feedback templates match byte-exactly",
              criterion_prompt_goldens);
    criterion(7, "conversational loop: feedback, restart identity, budget safety",
              criterion_conversation_loop);
    criterion(8, "cost accounting: exact decimals, linearity, trace-file summation",
              criterion_cost_accounting);
    criterion(9, "end-to-end hermetic repair via repair --mock",
              criterion_end_to_end);
    criterion(10, "patch statistics: nearest-rank quantiles on the seeded corpus",
              criterion_patch_stats_quantiles);

    if (g_failures == 0) {
        std::cout << "acceptance: all criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " assertion(s) failed\n";
    return 1;
}
