#include "regrepair/serialize.hpp"

#include "regrepair/errors.hpp"
#include "regrepair/io.hpp"

#include <fstream>

namespace regrepair {

Json read_json_file(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) raise(Errc::MalformedReport, "invalid JSON in " + path.string());
    return value;
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
    write_text_file(path, value.dump(2) + "\n");
}

namespace {

std::string get_string(const Json& json, const char* key, const std::string& fallback = {}) {
    if (!json.contains(key)) return fallback;
    return json.at(key).get<std::string>();
}

}  // namespace

BugManifest manifest_from_json(const Json& json) {
    BugManifest manifest;
    RegressionInstance& bug = manifest.bug;
    bug.bug_id = get_string(json, "bug_id");
    bug.project_id = get_string(json, "project_id");
    if (json.contains("commits")) {
        const Json& commits = json.at("commits");
        bug.inducing_commit = get_string(commits, "inducing");
        bug.fixing_commit = get_string(commits, "fixing");
        bug.fixing_date = get_string(commits, "fixing_date");
    }
    if (json.contains("witness_tests"))
        bug.witness_tests = json.at("witness_tests").get<std::vector<std::string>>();
    if (json.contains("buggy_function")) {
        const Json& fn = json.at("buggy_function");
        bug.buggy_function.file_path = get_string(fn, "file");
        bug.buggy_function.signature = get_string(fn, "signature");
        bug.buggy_function.line_span.start = fn.value("start_line", 1);
        bug.buggy_function.line_span.end = fn.value("end_line", 1);
    }
    bug.inducing_message = get_string(json, "inducing_message");
    bug.fixing_message = get_string(json, "fixing_message");
    if (json.contains("adapter")) {
        const Json& adapter = json.at("adapter");
        manifest.adapter.compile_command = get_string(adapter, "compile_command");
        manifest.adapter.test_command = get_string(adapter, "test_command");
        manifest.adapter.coverage_command = get_string(adapter, "coverage_command");
        manifest.adapter.coverage_report_path = get_string(adapter, "coverage_report_path");
        manifest.adapter.pass_marker = get_string(adapter, "pass_marker", "PASS");
        manifest.adapter.fail_marker = get_string(adapter, "fail_marker", "FAIL");
    }
    bug.validate();
    return manifest;
}

Json manifest_to_json(const BugManifest& manifest) {
    const RegressionInstance& bug = manifest.bug;
    Json json;
    json["bug_id"] = bug.bug_id;
    json["project_id"] = bug.project_id;
    json["commits"] = {
        {"inducing", bug.inducing_commit},
        {"fixing", bug.fixing_commit},
        {"fixing_date", bug.fixing_date},
    };
    json["witness_tests"] = bug.witness_tests;
    json["buggy_function"] = {
        {"file", bug.buggy_function.file_path},
        {"signature", bug.buggy_function.signature},
        {"start_line", bug.buggy_function.line_span.start},
        {"end_line", bug.buggy_function.line_span.end},
    };
    json["inducing_message"] = bug.inducing_message;
    json["fixing_message"] = bug.fixing_message;
    json["adapter"] = {
        {"compile_command", manifest.adapter.compile_command},
        {"test_command", manifest.adapter.test_command},
        {"coverage_command", manifest.adapter.coverage_command},
        {"coverage_report_path", manifest.adapter.coverage_report_path},
        {"pass_marker", manifest.adapter.pass_marker},
        {"fail_marker", manifest.adapter.fail_marker},
    };
    return json;
}

namespace {

Json verdict_to_json(const RepairVerdict& verdict) {
    Json json;
    json["kind"] = std::string(verdict_kind_name(verdict.kind));
    if (!verdict.message.empty()) json["message"] = verdict.message;
    return json;
}

RepairVerdict verdict_from_json(const Json& json) {
    RepairVerdict verdict;
    verdict.kind = verdict_kind_from_name(json.at("kind").get<std::string>());
    verdict.message = json.value("message", "");
    return verdict;
}

}  // namespace

Json trace_to_json(const RepairTrace& trace) {
    Json json;
    json["bug_id"] = trace.bug_id;
    json["strategy"] = std::string(strategy_name(trace.strategy));
    json["mode"] = std::string(prompt_mode_name(trace.mode));
    Json calls = Json::array();
    for (const RepairCall& call : trace.calls) {
        Json entry;
        entry["attempt"] = call.attempt;
        entry["round"] = call.round;
        entry["prompt_tokens"] = call.prompt_tokens;
        entry["reply_tokens"] = call.reply_tokens;
        entry["verdict"] = verdict_to_json(call.verdict);
        calls.push_back(std::move(entry));
    }
    json["calls"] = std::move(calls);
    json["final"] = trace.plausible_patch ? "plausible" : "exhausted";
    if (trace.plausible_patch) {
        json["plausible_patch"] = {
            {"extraction", std::string(extraction_name(trace.plausible_patch->extraction))},
            {"function_source", trace.plausible_patch->function_source},
        };
    }
    Json patch_files = Json::array();
    for (const auto& [call_index, _] : trace.patches)
        patch_files.push_back("patches/" + trace.bug_id + "/attempt-" +
                              std::to_string(call_index) + ".patch");
    json["patch_files"] = std::move(patch_files);
    json["messages_log"] = "messages-" + trace.bug_id + ".jsonl";
    json["total_cost"] = trace.total_cost.to_string();
    return json;
}

RepairTrace trace_from_json(const Json& json) {
    RepairTrace trace;
    trace.bug_id = json.at("bug_id").get<std::string>();
    trace.strategy = strategy_from_name(json.at("strategy").get<std::string>());
    trace.mode = prompt_mode_from_name(json.at("mode").get<std::string>());
    for (const Json& entry : json.at("calls")) {
        RepairCall call;
        call.attempt = entry.at("attempt").get<int>();
        call.round = entry.at("round").get<int>();
        call.prompt_tokens = entry.at("prompt_tokens").get<long>();
        call.reply_tokens = entry.at("reply_tokens").get<long>();
        call.verdict = verdict_from_json(entry.at("verdict"));
        trace.calls.push_back(std::move(call));
    }
    if (json.value("final", "") == "plausible" && json.contains("plausible_patch")) {
        PatchCandidate patch;
        patch.function_source = json.at("plausible_patch").at("function_source").get<std::string>();
        patch.extraction =
            json.at("plausible_patch").at("extraction").get<std::string>() == "bare_code"
                ? PatchCandidate::Extraction::BareCode
                : PatchCandidate::Extraction::FencedBlock;
        trace.plausible_patch = std::move(patch);
    }
    trace.total_cost = Decimal::parse(json.at("total_cost").get<std::string>());
    return trace;
}

namespace {

Json matrix_to_json(const OutcomeMatrix& matrix) {
    Json json;
    json["witness_tests"] = matrix.witness_tests;
    Json compile;
    for (const auto& [role, result] : matrix.compile_status)
        compile[std::string(role_name(role))] = result.ok ? "ok" : result.message;
    json["compile"] = std::move(compile);
    Json outcomes;
    for (const auto& [role, tests] : matrix.outcomes) {
        Json per_role;
        for (const auto& [test, outcome] : tests) {
            Json cell;
            cell["kind"] = std::string(outcome_kind_name(outcome.kind));
            if (!outcome.error_type.empty()) cell["error_type"] = outcome.error_type;
            if (!outcome.message.empty()) cell["message"] = outcome.message;
            per_role[test] = std::move(cell);
        }
        outcomes[std::string(role_name(role))] = std::move(per_role);
    }
    json["outcomes"] = std::move(outcomes);
    return json;
}

}  // namespace

Json funnel_report_to_json(const FunnelReport& report) {
    Json json;
    json["input"] = report.input;
    json["rejected_date"] = report.rejected_date;
    json["rejected_executability"] = report.rejected_executability;
    json["rejected_validity"] = report.rejected_validity;
    json["rejected_utility"] = report.rejected_utility;
    json["confirmed"] = report.confirmed;
    Json verdicts = Json::array();
    for (const auto& [bug_id, verdict] : report.verdicts) {
        Json entry;
        entry["bug_id"] = bug_id;
        entry["stage"] = std::string(funnel_stage_name(verdict.stage));
        entry["detail"] = verdict.detail;
        if (verdict.matrix) entry["matrix"] = matrix_to_json(*verdict.matrix);
        verdicts.push_back(std::move(entry));
    }
    json["verdicts"] = std::move(verdicts);
    return json;
}

std::vector<CorrectnessAnnotation> annotations_from_json(const Json& json) {
    if (!json.is_array()) raise(Errc::MalformedReport, "annotations file must be a JSON array");
    std::vector<CorrectnessAnnotation> annotations;
    for (const Json& entry : json) {
        CorrectnessAnnotation annotation;
        annotation.bug_id = entry.at("bug_id").get<std::string>();
        annotation.verdict =
            correctness_verdict_from_name(entry.at("verdict").get<std::string>());
        annotation.rationale = entry.value("rationale", "");
        annotations.push_back(std::move(annotation));
    }
    return annotations;
}

std::vector<OperatorAnnotation> operator_annotations_from_json(const Json& json) {
    if (!json.is_array()) raise(Errc::MalformedReport, "operators file must be a JSON array");
    std::vector<OperatorAnnotation> annotations;
    for (const Json& entry : json) {
        OperatorAnnotation annotation;
        annotation.bug_id = entry.at("bug_id").get<std::string>();
        annotation.category = bug_category_from_name(entry.at("category").get<std::string>());
        for (const Json& tag_json : entry.value("operators", Json::array())) {
            RepairOperatorTag tag;
            tag.group = operator_group_from_acronym(tag_json.at("group").get<std::string>());
            tag.action = operator_action_from_name(tag_json.at("action").get<std::string>());
            tag.validate();
            annotation.operators.push_back(tag);
        }
        if (entry.contains("methods_modified"))
            annotation.methods_modified = entry.at("methods_modified").get<long>();
        annotations.push_back(std::move(annotation));
    }
    return annotations;
}

Json changeset_to_json(const ChangeSet& changes) {
    Json files = Json::array();
    for (const FileChanges& file : changes.files) {
        Json hunks = Json::array();
        for (const Hunk& hunk : file.hunks) {
            Json edits = Json::array();
            for (const LineEdit& edit : hunk.edits) {
                Json entry;
                entry["kind"] = std::string(edit_kind_name(edit.kind));
                if (edit.old_line) entry["old_line"] = *edit.old_line;
                if (edit.new_line) entry["new_line"] = *edit.new_line;
                entry["text"] = edit.text;
                edits.push_back(std::move(entry));
            }
            hunks.push_back({{"edits", std::move(edits)}});
        }
        files.push_back({{"path", file.path}, {"hunks", std::move(hunks)}});
    }
    Json json;
    json["files"] = std::move(files);
    json["binary_skipped"] = changes.binary_skipped;
    return json;
}

}  // namespace regrepair
