#include "regrepair/changes.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

namespace {

using namespace regrepair;

std::string synthetic_source(int lines, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> token(0, 99);
    std::ostringstream out;
    for (int i = 0; i < lines; ++i)
        out << "    statement_" << token(rng) << "(arg_" << token(rng) << ");\n";
    return out.str();
}

std::string mutate(const std::string& content, int edits, unsigned seed) {
    std::vector<std::string> lines;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line + "\n");
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, lines.empty() ? 0 : lines.size() - 1);
    for (int i = 0; i < edits && !lines.empty(); ++i)
        lines[pick(rng)] = "    patched_call();\n";
    std::string out;
    for (const std::string& l : lines) out += l;
    return out;
}

void BM_ComputeDiff(benchmark::State& state) {
    int lines = static_cast<int>(state.range(0));
    FileMap old_tree{{"f", synthetic_source(lines, 1)}};
    FileMap new_tree{{"f", mutate(old_tree["f"], lines / 20 + 1, 2)}};
    for (auto _ : state) {
        ChangeSet changes = compute_diff(old_tree, new_tree);
        benchmark::DoNotOptimize(changes);
    }
}
BENCHMARK(BM_ComputeDiff)->Arg(100)->Arg(1000)->Arg(5000);

void BM_UnifiedDiffRender(benchmark::State& state) {
    int lines = static_cast<int>(state.range(0));
    std::string old_content = synthetic_source(lines, 3);
    std::string new_content = mutate(old_content, lines / 10 + 1, 4);
    for (auto _ : state) {
        std::string diff = render_unified_diff(old_content, new_content, "a/f", "b/f");
        benchmark::DoNotOptimize(diff);
    }
}
BENCHMARK(BM_UnifiedDiffRender)->Arg(100)->Arg(1000);

void BM_PatchReplay(benchmark::State& state) {
    int lines = static_cast<int>(state.range(0));
    std::string old_content = synthetic_source(lines, 5);
    std::string new_content = mutate(old_content, lines / 10 + 1, 6);
    ChangeSet changes =
        compute_diff(FileMap{{"f", old_content}}, FileMap{{"f", new_content}});
    const FileChanges* fc = changes.find("f");
    for (auto _ : state) {
        std::string replayed = fc ? apply_changes(old_content, *fc) : old_content;
        benchmark::DoNotOptimize(replayed);
    }
}
BENCHMARK(BM_PatchReplay)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
