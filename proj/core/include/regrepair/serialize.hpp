#pragma once

#include "regrepair/adapter.hpp"
#include "regrepair/changes.hpp"
#include "regrepair/metrics.hpp"
#include "regrepair/repair.hpp"
#include "regrepair/validator.hpp"

#include <json.hpp>

#include <filesystem>

namespace regrepair {

// Insertion-ordered JSON keeps every serialized artifact byte-stable.
using Json = nlohmann::ordered_json;

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& value);

BugManifest manifest_from_json(const Json& json);
Json manifest_to_json(const BugManifest& manifest);

Json trace_to_json(const RepairTrace& trace);
RepairTrace trace_from_json(const Json& json);  // transcript/patches live in side files

Json funnel_report_to_json(const FunnelReport& report);

std::vector<CorrectnessAnnotation> annotations_from_json(const Json& json);
std::vector<OperatorAnnotation> operator_annotations_from_json(const Json& json);

Json changeset_to_json(const ChangeSet& changes);

}  // namespace regrepair
