#include "regrepair/adapter.hpp"
#include "regrepair/changes.hpp"
#include "regrepair/prompting.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

namespace {

using namespace regrepair;

void BM_LcovParse(benchmark::State& state) {
    int files = static_cast<int>(state.range(0));
    std::ostringstream lcov;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> hits(0, 3);
    for (int f = 0; f < files; ++f) {
        lcov << "SF:src/module_" << f << ".java\n";
        for (int line = 1; line <= 200; ++line)
            lcov << "DA:" << line << "," << hits(rng) << "\n";
        lcov << "end_of_record\n";
    }
    std::string report = lcov.str();
    for (auto _ : state) {
        CoverageMap coverage = parse_lcov(report);
        benchmark::DoNotOptimize(coverage);
    }
}
BENCHMARK(BM_LcovParse)->Arg(10)->Arg(50);

void BM_CoverageIntersection(benchmark::State& state) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coin(0, 1);
    std::ostringstream old_content, new_content;
    for (int i = 0; i < 500; ++i) {
        old_content << "line " << i << "\n";
        new_content << (i % 7 == 0 ? "changed" : "line") << " " << i << "\n";
    }
    ChangeSet changes = compute_diff(FileMap{{"f", old_content.str()}},
                                     FileMap{{"f", new_content.str()}});
    CoverageMap coverage;
    for (int line = 1; line <= 500; ++line)
        if (coin(rng)) coverage["f"].insert(line);
    for (auto _ : state) {
        MinimizedChangeSet minimized =
            intersect_with_coverage(changes, coverage, CoverageSide::NewLines);
        benchmark::DoNotOptimize(minimized);
    }
}
BENCHMARK(BM_CoverageIntersection);

void BM_BuildInitialPrompt(benchmark::State& state) {
    BugContext ctx;
    std::ostringstream body;
    for (int i = 0; i < 60; ++i) body << "    statement_" << i << "();\n";
    ctx.buggy_function_source = "void process() {\n" + body.str() + "}";
    for (int i = 0; i < 4; ++i)
        ctx.failing_tests.push_back({"Suite#case" + std::to_string(i),
                                     "org.junit.ComparisonFailure",
                                     "expected:<ok> but was:<broken>"});
    ctx.bic_commit_message = "Refactor processing loop for throughput";
    ctx.bic_diff = "--- a/f\n+++ b/f\n@@ -1 +1 @@\n-old\n+new";
    ctx.function_changed_in_bic = true;
    for (auto _ : state) {
        Conversation conv =
            build_initial_prompt(ctx, PromptMode::WithBic, RepairStrategy::Conversational);
        benchmark::DoNotOptimize(conv);
    }
}
BENCHMARK(BM_BuildInitialPrompt);

}  // namespace

BENCHMARK_MAIN();
