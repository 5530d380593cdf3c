#pragma once

#include "regrepair/adapter.hpp"
#include "regrepair/model.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace regrepair {

enum class EditKind { Added, Removed, Modified };
std::string_view edit_kind_name(EditKind kind);

/// One line-level edit. Added carries new_line only, Removed old_line only,
/// Modified both. `text` is the new text for Added/Modified and the old text
/// for Removed; it keeps its line terminator except on a final unterminated
/// line.
struct LineEdit {
    EditKind kind{EditKind::Modified};
    std::optional<int> old_line;
    std::optional<int> new_line;
    std::string text;
};

/// A chunk: a maximal run of contiguous changed lines (zero context).
struct Hunk {
    std::vector<LineEdit> edits;
};

struct FileChanges {
    std::string path;
    std::vector<Hunk> hunks;
};

struct ChangeSet {
    std::vector<FileChanges> files;
    std::vector<std::string> binary_skipped;

    const FileChanges* find(const std::string& path) const;
};

using FileMap = std::map<std::string, std::string>;  // relative path -> content

/// Reads every regular file under root into memory. Entries whose name starts
/// with '.' are skipped, so workspace metadata never shows up in diffs.
FileMap load_tree(const std::filesystem::path& root);

/// Line diff per file. Within a hunk the i-th removed line is paired with the
/// i-th added line as Modified; leftovers stay Added/Removed. Files containing
/// NUL bytes are skipped and recorded in binary_skipped.
ChangeSet compute_diff(const FileMap& old_tree, const FileMap& new_tree);

/// Replays the edits of one file onto its old content. compute_diff followed
/// by apply_changes reproduces the new content byte-exactly.
std::string apply_changes(const std::string& old_content, const FileChanges& changes);

enum class CoverageSide { OldLines, NewLines };

using MinimizedChangeSet = std::map<std::string, std::set<int>>;

/// Per file, the changed line numbers present in the coverage map. NewLines
/// selects the new_line of Added/Modified edits (coverage collected on the
/// new version); OldLines selects the old_line of Removed/Modified edits.
MinimizedChangeSet intersect_with_coverage(const ChangeSet& changes,
                                           const CoverageMap& coverage,
                                           CoverageSide side);

struct PatchStats {
    long added{0};
    long removed{0};
    long modified{0};
    long patch_size{0};  // added + removed + modified
    long chunks{0};
    long files{0};
    std::optional<long> methods;  // from annotations only
};

PatchStats patch_stats(const ChangeSet& changes, std::optional<long> methods_modified = {});

/// Classic unified diff of two file contents, with "\ No newline at end of
/// file" handling. Labels are emitted verbatim after ---/+++.
std::string render_unified_diff(const std::string& old_content,
                                const std::string& new_content,
                                const std::string& old_label,
                                const std::string& new_label,
                                int context = 3);

struct OperatorAnnotation {
    std::string bug_id;
    BugCategory category{BugCategory::Local};
    std::vector<RepairOperatorTag> operators;
    std::optional<long> methods_modified;
};

struct OperatorDistribution {
    // Patches containing the operator at least once, keyed by label ("cndA").
    std::map<std::string, long> total;
    std::map<BugCategory, std::map<std::string, long>> by_category;
    // Operator occurrences per patch -> number of patches.
    std::map<std::size_t, long> operators_per_patch;
};

OperatorDistribution aggregate_operators(const std::vector<OperatorAnnotation>& annotations);

/// Nearest-rank percentile: the value at index ceil(p/100 * n) of the sorted
/// sample (1-based). percent must be in (0, 100].
long nearest_rank_percentile(std::vector<long> values, int percent);

}  // namespace regrepair
