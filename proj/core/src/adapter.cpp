#include "regrepair/adapter.hpp"

#include "regrepair/errors.hpp"
#include "regrepair/io.hpp"
#include "regrepair/serialize.hpp"
#include "regrepair/subprocess.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace regrepair {

namespace fs = std::filesystem;

namespace {

constexpr const char* kWorkspaceMetaFile = ".workspace.json";
constexpr const char* kFixtureFile = "fixture.json";

std::string normalize_path(std::string path) {
    std::replace(path.begin(), path.end(), '\\', '/');
    while (path.rfind("./", 0) == 0) path.erase(0, 2);
    return path;
}

std::string substitute(std::string text, std::string_view placeholder, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += ";";
        out += ids[i];
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

void AdapterSpec::validate() const {
    if (compile_command.empty()) raise(Errc::AdapterMissing, "adapter has no compile command");
    if (test_command.empty()) raise(Errc::AdapterMissing, "adapter has no test command");
    if (pass_marker.empty() || fail_marker.empty())
        raise(Errc::AdapterMissing, "adapter markers must be non-empty");
    if (pass_marker.find(fail_marker) != std::string::npos ||
        fail_marker.find(pass_marker) != std::string::npos)
        raise(Errc::AdapterMissing, "pass/fail markers must be disjoint patterns");
}

BugStore::BugStore(fs::path root) : root_(std::move(root)) {
    if (!fs::is_directory(root_)) raise(Errc::IoFailure, "bug store not found at " + root_.string());
}

std::vector<std::string> BugStore::list_bugs() const {
    std::vector<std::string> bugs;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (!entry.is_directory()) continue;
        if (fs::exists(entry.path() / "manifest.json"))
            bugs.push_back(entry.path().filename().string());
    }
    std::sort(bugs.begin(), bugs.end());
    return bugs;
}

bool BugStore::has_bug(const std::string& bug_id) const {
    return fs::exists(root_ / bug_id / "manifest.json");
}

BugManifest BugStore::load(const std::string& bug_id) const {
    fs::path manifest_path = root_ / bug_id / "manifest.json";
    if (!fs::exists(manifest_path))
        raise(Errc::MissingSnapshot, "no manifest for bug '" + bug_id + "' in " + root_.string());
    return manifest_from_json(read_json_file(manifest_path));
}

fs::path BugStore::snapshot_dir(const std::string& bug_id, SnapshotRole role) const {
    return root_ / bug_id / std::string(role_name(role));
}

namespace {

Json workspace_meta_to_json(const WorkspaceMeta& meta) {
    Json json;
    json["bug_id"] = meta.bug_id;
    json["role"] = std::string(role_name(meta.role));
    json["witness_tests"] = meta.witness_tests;
    json["buggy_function"] = {
        {"file", meta.buggy_function.file_path},
        {"signature", meta.buggy_function.signature},
        {"start_line", meta.buggy_function.line_span.start},
        {"end_line", meta.buggy_function.line_span.end},
    };
    json["adapter"] = {
        {"compile_command", meta.adapter.compile_command},
        {"test_command", meta.adapter.test_command},
        {"coverage_command", meta.adapter.coverage_command},
        {"coverage_report_path", meta.adapter.coverage_report_path},
        {"pass_marker", meta.adapter.pass_marker},
        {"fail_marker", meta.adapter.fail_marker},
    };
    return json;
}

WorkspaceMeta workspace_meta_from_json(const Json& json) {
    WorkspaceMeta meta;
    meta.bug_id = json.at("bug_id").get<std::string>();
    meta.role = role_from_name(json.at("role").get<std::string>());
    meta.witness_tests = json.at("witness_tests").get<std::vector<std::string>>();
    const Json& fn = json.at("buggy_function");
    meta.buggy_function.file_path = fn.at("file").get<std::string>();
    meta.buggy_function.signature = fn.at("signature").get<std::string>();
    meta.buggy_function.line_span.start = fn.at("start_line").get<int>();
    meta.buggy_function.line_span.end = fn.at("end_line").get<int>();
    const Json& adapter = json.at("adapter");
    meta.adapter.compile_command = adapter.value("compile_command", "");
    meta.adapter.test_command = adapter.value("test_command", "");
    meta.adapter.coverage_command = adapter.value("coverage_command", "");
    meta.adapter.coverage_report_path = adapter.value("coverage_report_path", "");
    meta.adapter.pass_marker = adapter.value("pass_marker", "PASS");
    meta.adapter.fail_marker = adapter.value("fail_marker", "FAIL");
    return meta;
}

AdapterKind detect_kind(const fs::path& root) {
    return fs::exists(root / kFixtureFile) ? AdapterKind::ScriptedFixture
                                           : AdapterKind::CommandTemplate;
}

}  // namespace

Workspace checkout(const BugStore& store,
                   const std::string& bug_id,
                   SnapshotRole role,
                   const fs::path& dest) {
    fs::path snapshot = store.snapshot_dir(bug_id, role);
    if (!fs::is_directory(snapshot))
        raise(Errc::MissingSnapshot,
              "bug '" + bug_id + "' has no " + std::string(role_name(role)) + " snapshot");
    BugManifest manifest = store.load(bug_id);
    copy_tree(snapshot, dest);

    WorkspaceMeta meta;
    meta.bug_id = bug_id;
    meta.role = role;
    meta.witness_tests = manifest.bug.witness_tests;
    meta.buggy_function = manifest.bug.buggy_function;
    meta.adapter = manifest.adapter;
    write_json_file(dest / kWorkspaceMetaFile, workspace_meta_to_json(meta));

    return Workspace{bug_id, role, dest, detect_kind(dest)};
}

Workspace load_workspace(const fs::path& root) {
    WorkspaceMeta meta = load_workspace_meta(root);
    return Workspace{meta.bug_id, meta.role, root, detect_kind(root)};
}

WorkspaceMeta load_workspace_meta(const fs::path& root) {
    fs::path meta_path = root / kWorkspaceMetaFile;
    if (!fs::exists(meta_path))
        raise(Errc::IoFailure, root.string() + " is not a checked-out workspace");
    return workspace_meta_from_json(read_json_file(meta_path));
}

CoverageMap parse_lcov(const std::string& text) {
    CoverageMap coverage;
    std::string current;
    for (const std::string& line : split_lines(text)) {
        if (line.rfind("SF:", 0) == 0) {
            current = normalize_path(line.substr(3));
            if (current.empty()) raise(Errc::MalformedReport, "LCOV SF record with empty path");
        } else if (line.rfind("DA:", 0) == 0) {
            if (current.empty())
                raise(Errc::MalformedReport, "LCOV DA record before any SF record");
            std::size_t comma = line.find(',', 3);
            if (comma == std::string::npos)
                raise(Errc::MalformedReport, "malformed LCOV DA record '" + line + "'");
            int line_no = 0;
            long count = 0;
            try {
                line_no = std::stoi(line.substr(3, comma - 3));
                count = std::stol(line.substr(comma + 1));
            } catch (const std::exception&) {
                raise(Errc::MalformedReport, "malformed LCOV DA record '" + line + "'");
            }
            if (line_no < 1)
                raise(Errc::MalformedReport, "LCOV DA record with line number < 1: '" + line + "'");
            if (count > 0) coverage[current].insert(line_no);
        } else if (line == "end_of_record") {
            current.clear();
        }
    }
    return coverage;
}

CoverageMap parse_coverage_json(const std::string& text) {
    Json json = Json::parse(text, nullptr, false);
    if (json.is_discarded() || !json.is_object())
        raise(Errc::MalformedReport, "coverage JSON must be an object of {file: [lines]}");
    CoverageMap coverage;
    for (const auto& [file, lines] : json.items()) {
        if (!lines.is_array())
            raise(Errc::MalformedReport, "coverage entry for " + file + " is not an array");
        for (const Json& value : lines) {
            int line_no = value.get<int>();
            if (line_no < 1)
                raise(Errc::MalformedReport, "coverage line number < 1 for " + file);
            coverage[normalize_path(file)].insert(line_no);
        }
    }
    std::erase_if(coverage, [](const auto& entry) { return entry.second.empty(); });
    return coverage;
}

namespace {

// ---------------------------------------------------------------------------
// Scripted fixtures: fixture.json declares the compile result, per-test
// outcomes and coverage, so desk-scale corpora need no build toolchain.
// ---------------------------------------------------------------------------

struct Fixture {
    CompileResult compile;
    std::vector<std::pair<std::string, TestOutcome>> tests;  // declaration order
    std::optional<CoverageMap> coverage;
};

Fixture load_fixture(const fs::path& root) {
    fs::path path = root / kFixtureFile;
    if (!fs::exists(path))
        raise(Errc::AdapterMissing, "no fixture.json in workspace " + root.string());
    Json json = read_json_file(path);
    Fixture fixture;
    const Json& compile = json.at("compile");
    if (compile.is_string() && compile.get<std::string>() == "ok") {
        fixture.compile = CompileResult{true, ""};
    } else if (compile.is_object() && compile.contains("fail")) {
        fixture.compile = CompileResult{false, compile.at("fail").get<std::string>()};
    } else {
        raise(Errc::MalformedReport, "fixture compile must be \"ok\" or {\"fail\": msg}");
    }
    const Json tests_json = json.value("tests", Json::object());
    for (const auto& [id, value] : tests_json.items()) {
        TestOutcome outcome;
        if (value.is_string()) {
            const std::string text = value.get<std::string>();
            if (text == "pass")
                outcome = TestOutcome::pass();
            else if (text == "timeout")
                outcome = TestOutcome::timeout();
            else
                raise(Errc::MalformedReport, "fixture test '" + id + "' has unknown value");
        } else if (value.is_object() && value.contains("fail")) {
            const Json& fail = value.at("fail");
            outcome = TestOutcome::functional_fail(fail.value("type", "TestFailure"),
                                                   fail.value("msg", ""));
        } else {
            raise(Errc::MalformedReport, "fixture test '" + id + "' has unknown value");
        }
        fixture.tests.emplace_back(id, std::move(outcome));
    }
    if (json.contains("coverage")) {
        CoverageMap coverage;
        for (const auto& [file, lines] : json.at("coverage").items())
            for (const Json& value : lines) coverage[normalize_path(file)].insert(value.get<int>());
        fixture.coverage = std::move(coverage);
    }
    return fixture;
}

// ---------------------------------------------------------------------------
// Command templates: real build/test commands driven through /bin/sh with
// marker-based outcome parsing.
// ---------------------------------------------------------------------------

class DefaultAdapter : public ProjectAdapter {
  public:
    CompileResult compile(const Workspace& ws) override {
        if (ws.adapter_kind == AdapterKind::ScriptedFixture)
            return load_fixture(ws.root).compile;
        AdapterSpec spec = adapter_spec(ws);
        RunResult run = run_shell(spec.compile_command, ws.root, compile_timeout_);
        if (run.exit_code == 0 && !run.timed_out) return CompileResult{true, run.output};
        return CompileResult{false, run.output};
    }

    std::map<std::string, TestOutcome> run_tests(const Workspace& ws,
                                                 const TestSelection& tests,
                                                 std::chrono::milliseconds timeout) override {
        if (!tests.all_tests && tests.ids.empty()) return {};
        if (ws.adapter_kind == AdapterKind::ScriptedFixture)
            return run_fixture_tests(ws, tests);
        return run_command_tests(ws, tests, timeout);
    }

    CoverageMap collect_coverage(const Workspace& ws,
                                 const std::vector<std::string>& tests) override {
        if (ws.adapter_kind == AdapterKind::ScriptedFixture) {
            Fixture fixture = load_fixture(ws.root);
            if (!fixture.coverage)
                raise(Errc::CoverageUnavailable,
                      "fixture for " + ws.bug_id + " declares no coverage");
            return *fixture.coverage;
        }
        AdapterSpec spec = adapter_spec(ws);
        if (spec.coverage_command.empty() && spec.coverage_report_path.empty())
            raise(Errc::CoverageUnavailable, "adapter for " + ws.bug_id + " has no coverage support");
        if (!spec.coverage_command.empty()) {
            std::string command = substitute(spec.coverage_command, "{tests}", join_ids(tests));
            RunResult run = run_shell(command, ws.root, compile_timeout_);
            if (run.exit_code != 0 || run.timed_out)
                raise(Errc::CoverageUnavailable, "coverage command failed: " + run.output);
        }
        if (spec.coverage_report_path.empty())
            raise(Errc::CoverageUnavailable, "adapter declares no coverage report path");
        fs::path report = ws.root / spec.coverage_report_path;
        if (!fs::exists(report))
            raise(Errc::CoverageUnavailable, "coverage report missing at " + report.string());
        std::string text = read_text_file(report);
        std::size_t first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') return parse_coverage_json(text);
        return parse_lcov(text);
    }

  private:
    AdapterSpec adapter_spec(const Workspace& ws) {
        AdapterSpec spec = load_workspace_meta(ws.root).adapter;
        spec.validate();
        return spec;
    }

    std::map<std::string, TestOutcome> run_fixture_tests(const Workspace& ws,
                                                         const TestSelection& tests) {
        Fixture fixture = load_fixture(ws.root);
        std::map<std::string, TestOutcome> outcomes;
        if (tests.all_tests) {
            for (const auto& [id, outcome] : fixture.tests) outcomes[id] = outcome;
            return outcomes;
        }
        for (const std::string& id : tests.ids) {
            auto it = std::find_if(fixture.tests.begin(), fixture.tests.end(),
                                   [&](const auto& entry) { return entry.first == id; });
            if (it == fixture.tests.end())
                raise(Errc::UnknownTest, "fixture for " + ws.bug_id + " has no test '" + id + "'");
            outcomes[id] = it->second;
        }
        return outcomes;
    }

    std::map<std::string, TestOutcome> run_command_tests(const Workspace& ws,
                                                         const TestSelection& tests,
                                                         std::chrono::milliseconds timeout) {
        AdapterSpec spec = adapter_spec(ws);
        std::string command = substitute(spec.test_command, "{tests}", join_ids(tests.ids));
        command = substitute(command, "{timeout}",
                             std::to_string(std::chrono::duration_cast<std::chrono::seconds>(timeout)
                                                .count()));
        RunResult run = run_shell(command, ws.root, timeout);

        std::map<std::string, TestOutcome> outcomes;
        if (run.timed_out) {
            for (const std::string& id : requested_ids(ws, tests, run, spec))
                outcomes[id] = TestOutcome::timeout();
            return outcomes;
        }
        std::vector<std::string> lines = split_lines(run.output);
        std::vector<std::size_t> marker_lines;
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (lines[i].find(spec.pass_marker) != std::string::npos ||
                lines[i].find(spec.fail_marker) != std::string::npos)
                marker_lines.push_back(i);

        for (const std::string& id : requested_ids(ws, tests, run, spec)) {
            std::optional<std::size_t> match;
            for (std::size_t idx : marker_lines) {
                if (lines[idx].find(id) != std::string::npos) {
                    match = idx;
                    break;
                }
            }
            if (!match) {
                if (run.signaled) {
                    outcomes[id] = TestOutcome::crash("test runner terminated by signal " +
                                                      std::to_string(run.signal_no));
                    continue;
                }
                raise(Errc::UnknownTest,
                      "test '" + id + "' produced no marker line in adapter output");
            }
            outcomes[id] = classify_line_block(lines, marker_lines, *match, run, spec, id);
        }
        return outcomes;
    }

    // The ids to report on: the request itself, or for All the ids found on
    // marker lines (first token that is not part of a marker).
    std::vector<std::string> requested_ids(const Workspace& ws,
                                           const TestSelection& tests,
                                           const RunResult& run,
                                           const AdapterSpec& spec) {
        if (!tests.all_tests) return tests.ids;
        std::vector<std::string> ids;
        for (const std::string& line : split_lines(run.output)) {
            if (line.find(spec.pass_marker) == std::string::npos &&
                line.find(spec.fail_marker) == std::string::npos)
                continue;
            std::istringstream in(line);
            std::string token;
            while (in >> token) {
                if (token.find(spec.pass_marker) != std::string::npos ||
                    token.find(spec.fail_marker) != std::string::npos)
                    continue;
                while (!token.empty() && (token.back() == ':' || token.back() == ','))
                    token.pop_back();
                if (!token.empty() &&
                    std::find(ids.begin(), ids.end(), token) == ids.end())
                    ids.push_back(token);
                break;
            }
        }
        if (ids.empty() && run.exit_code != 0 && !run.signaled)
            raise(Errc::UnparseableOutput,
                  "full-suite run for " + ws.bug_id + " produced no marker lines");
        return ids;
    }

    TestOutcome classify_line_block(const std::vector<std::string>& lines,
                                    const std::vector<std::size_t>& marker_lines,
                                    std::size_t start,
                                    const RunResult& run,
                                    const AdapterSpec& spec,
                                    const std::string& id) {
        std::size_t end = lines.size();
        for (std::size_t idx : marker_lines)
            if (idx > start) {
                end = idx;
                break;
            }
        std::string block;
        for (std::size_t i = start; i < end; ++i) {
            block += lines[i];
            block += '\n';
        }
        RawProcessOutput raw;
        raw.exit_code = run.exit_code;
        raw.signaled = run.signaled;
        raw.signal_no = run.signal_no;
        raw.output = block;
        return classify_outcome(raw, false, spec.pass_marker, spec.fail_marker, id);
    }

    std::chrono::milliseconds compile_timeout_{std::chrono::minutes(30)};
};

}  // namespace

std::unique_ptr<ProjectAdapter> make_default_adapter() {
    return std::make_unique<DefaultAdapter>();
}

}  // namespace regrepair
