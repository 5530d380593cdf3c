#include "regrepair/changes.hpp"

#include "regrepair/errors.hpp"
#include "regrepair/io.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace regrepair {

namespace fs = std::filesystem;

std::string_view edit_kind_name(EditKind kind) {
    switch (kind) {
        case EditKind::Added: return "added";
        case EditKind::Removed: return "removed";
        case EditKind::Modified: return "modified";
    }
    return "?";
}

const FileChanges* ChangeSet::find(const std::string& path) const {
    for (const FileChanges& file : files)
        if (file.path == path) return &file;
    return nullptr;
}

namespace {

// Lines keep their terminator; a final unterminated line stays bare, so a
// trailing-newline change shows up as a regular line edit.
std::vector<std::string> split_keep_terminators(const std::string& content) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin < content.size()) {
        std::size_t end = content.find('\n', begin);
        if (end == std::string::npos) {
            lines.push_back(content.substr(begin));
            break;
        }
        lines.push_back(content.substr(begin, end - begin + 1));
        begin = end + 1;
    }
    return lines;
}

enum class DiffOp { Keep, Del, Ins };

// Myers' greedy O((N+M)D) shortest edit script.
std::vector<DiffOp> myers_diff(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max_d = n + m;
    if (max_d == 0) return {};

    std::vector<std::vector<int>> trace;
    std::vector<int> v(static_cast<std::size_t>(2 * max_d + 1), 0);
    auto at = [&](std::vector<int>& vec, int k) -> int& {
        return vec[static_cast<std::size_t>(k + max_d)];
    };

    int found_d = -1;
    for (int d = 0; d <= max_d && found_d < 0; ++d) {
        trace.push_back(v);
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && at(v, k - 1) < at(v, k + 1)))
                x = at(v, k + 1);
            else
                x = at(v, k - 1) + 1;
            int y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            at(v, k) = x;
            if (x >= n && y >= m) {
                found_d = d;
                break;
            }
        }
    }
    assert(found_d >= 0);

    std::vector<DiffOp> ops;
    int x = n;
    int y = m;
    for (int d = found_d; d >= 0; --d) {
        std::vector<int>& prev = trace[static_cast<std::size_t>(d)];
        int k = x - y;
        int prev_k;
        if (k == -d || (k != d && at(prev, k - 1) < at(prev, k + 1)))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        int prev_x = at(prev, prev_k);
        int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            ops.push_back(DiffOp::Keep);
            --x;
            --y;
        }
        if (d > 0) ops.push_back(x == prev_x ? DiffOp::Ins : DiffOp::Del);
        x = prev_x;
        y = prev_y;
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

struct PendingLine {
    int line;
    const std::string* text;
};

Hunk make_hunk(const std::vector<PendingLine>& removed, const std::vector<PendingLine>& added) {
    Hunk hunk;
    std::size_t paired = std::min(removed.size(), added.size());
    for (std::size_t i = 0; i < paired; ++i)
        hunk.edits.push_back(LineEdit{EditKind::Modified, removed[i].line, added[i].line,
                                      *added[i].text});
    for (std::size_t i = paired; i < removed.size(); ++i)
        hunk.edits.push_back(
            LineEdit{EditKind::Removed, removed[i].line, std::nullopt, *removed[i].text});
    for (std::size_t i = paired; i < added.size(); ++i)
        hunk.edits.push_back(
            LineEdit{EditKind::Added, std::nullopt, added[i].line, *added[i].text});
    return hunk;
}

std::vector<Hunk> diff_file(const std::vector<std::string>& old_lines,
                            const std::vector<std::string>& new_lines) {
    std::vector<DiffOp> ops = myers_diff(old_lines, new_lines);
    std::vector<Hunk> hunks;
    std::vector<PendingLine> removed;
    std::vector<PendingLine> added;
    int old_line = 1;
    int new_line = 1;
    auto flush = [&] {
        if (!removed.empty() || !added.empty()) {
            hunks.push_back(make_hunk(removed, added));
            removed.clear();
            added.clear();
        }
    };
    for (DiffOp op : ops) {
        switch (op) {
            case DiffOp::Keep:
                flush();
                ++old_line;
                ++new_line;
                break;
            case DiffOp::Del:
                removed.push_back({old_line, &old_lines[static_cast<std::size_t>(old_line - 1)]});
                ++old_line;
                break;
            case DiffOp::Ins:
                added.push_back({new_line, &new_lines[static_cast<std::size_t>(new_line - 1)]});
                ++new_line;
                break;
        }
    }
    flush();
    return hunks;
}

bool looks_binary(const std::string& content) {
    return content.find('\0') != std::string::npos;
}

}  // namespace

FileMap load_tree(const fs::path& root) {
    FileMap tree;
    if (!fs::is_directory(root)) raise(Errc::IoFailure, "not a directory: " + root.string());
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
        const fs::path& path = it->path();
        std::string name = path.filename().string();
        if (!name.empty() && name.front() == '.') {
            if (it->is_directory()) it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file()) continue;
        std::string rel = fs::relative(path, root).generic_string();
        tree[rel] = read_text_file(path);
    }
    return tree;
}

ChangeSet compute_diff(const FileMap& old_tree, const FileMap& new_tree) {
    ChangeSet changes;
    std::vector<std::string> paths;
    for (const auto& [path, _] : old_tree) paths.push_back(path);
    for (const auto& [path, _] : new_tree)
        if (!old_tree.contains(path)) paths.push_back(path);
    std::sort(paths.begin(), paths.end());

    static const std::string kEmpty;
    for (const std::string& path : paths) {
        auto old_it = old_tree.find(path);
        auto new_it = new_tree.find(path);
        const std::string& old_content = old_it != old_tree.end() ? old_it->second : kEmpty;
        const std::string& new_content = new_it != new_tree.end() ? new_it->second : kEmpty;
        if (looks_binary(old_content) || looks_binary(new_content)) {
            changes.binary_skipped.push_back(path);
            continue;
        }
        if (old_content == new_content) continue;
        std::vector<Hunk> hunks =
            diff_file(split_keep_terminators(old_content), split_keep_terminators(new_content));
        if (!hunks.empty()) changes.files.push_back(FileChanges{path, std::move(hunks)});
    }
    return changes;
}

std::string apply_changes(const std::string& old_content, const FileChanges& changes) {
    std::vector<std::string> old_lines = split_keep_terminators(old_content);
    std::map<int, const std::string*> replacements;  // old_line -> new text
    std::set<int> removals;
    std::vector<std::pair<int, const std::string*>> additions;  // new_line -> text
    for (const Hunk& hunk : changes.hunks) {
        for (const LineEdit& edit : hunk.edits) {
            switch (edit.kind) {
                case EditKind::Modified:
                    replacements[edit.old_line.value()] = &edit.text;
                    break;
                case EditKind::Removed:
                    removals.insert(edit.old_line.value());
                    break;
                case EditKind::Added:
                    additions.emplace_back(edit.new_line.value(), &edit.text);
                    break;
            }
        }
    }
    std::vector<const std::string*> result;
    for (int line = 1; line <= static_cast<int>(old_lines.size()); ++line) {
        if (removals.contains(line)) continue;
        auto it = replacements.find(line);
        result.push_back(it != replacements.end() ? it->second
                                                  : &old_lines[static_cast<std::size_t>(line - 1)]);
    }
    std::sort(additions.begin(), additions.end(),
              [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    for (const auto& [new_line, text] : additions) {
        if (new_line < 1 || new_line > static_cast<int>(result.size()) + 1)
            raise(Errc::InvalidArgument,
                  "added line " + std::to_string(new_line) + " is outside the replayed file");
        result.insert(result.begin() + (new_line - 1), text);
    }
    std::string out;
    for (const std::string* line : result) out += *line;
    return out;
}

MinimizedChangeSet intersect_with_coverage(const ChangeSet& changes,
                                           const CoverageMap& coverage,
                                           CoverageSide side) {
    MinimizedChangeSet minimized;
    for (const FileChanges& file : changes.files) {
        std::set<int>& lines = minimized[file.path];
        auto covered = coverage.find(file.path);
        if (covered == coverage.end()) continue;
        for (const Hunk& hunk : file.hunks) {
            for (const LineEdit& edit : hunk.edits) {
                std::optional<int> line;
                if (side == CoverageSide::NewLines) {
                    if (edit.kind == EditKind::Added || edit.kind == EditKind::Modified)
                        line = edit.new_line;
                } else {
                    if (edit.kind == EditKind::Removed || edit.kind == EditKind::Modified)
                        line = edit.old_line;
                }
                if (line && covered->second.contains(*line)) lines.insert(*line);
            }
        }
    }
    return minimized;
}

PatchStats patch_stats(const ChangeSet& changes, std::optional<long> methods_modified) {
    PatchStats stats;
    for (const FileChanges& file : changes.files) {
        ++stats.files;
        stats.chunks += static_cast<long>(file.hunks.size());
        for (const Hunk& hunk : file.hunks) {
            for (const LineEdit& edit : hunk.edits) {
                switch (edit.kind) {
                    case EditKind::Added: ++stats.added; break;
                    case EditKind::Removed: ++stats.removed; break;
                    case EditKind::Modified: ++stats.modified; break;
                }
            }
        }
    }
    stats.patch_size = stats.added + stats.removed + stats.modified;
    stats.methods = methods_modified;
    return stats;
}

namespace {

struct UnifiedLine {
    char tag;  // ' ', '-', '+'
    const std::string* text;
};

void emit_line(std::string& out, char tag, const std::string& text) {
    out += tag;
    if (!text.empty() && text.back() == '\n') {
        out += text;
    } else {
        out += text;
        out += "\n\\ No newline at end of file\n";
    }
}

std::string range_header(int start, int count) {
    if (count == 1) return std::to_string(start);
    if (count == 0) return std::to_string(start - 1) + ",0";
    return std::to_string(start) + "," + std::to_string(count);
}

}  // namespace

std::string render_unified_diff(const std::string& old_content,
                                const std::string& new_content,
                                const std::string& old_label,
                                const std::string& new_label,
                                int context) {
    std::vector<std::string> old_lines = split_keep_terminators(old_content);
    std::vector<std::string> new_lines = split_keep_terminators(new_content);
    std::vector<DiffOp> ops = myers_diff(old_lines, new_lines);
    if (std::none_of(ops.begin(), ops.end(), [](DiffOp op) { return op != DiffOp::Keep; }))
        return "";

    // Positions of edit ops, then groups separated by more than 2*context
    // unchanged lines become separate unified hunks.
    std::vector<std::size_t> edit_positions;
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (ops[i] != DiffOp::Keep) edit_positions.push_back(i);

    std::string out = "--- " + old_label + "\n+++ " + new_label + "\n";

    std::size_t group_begin = 0;
    while (group_begin < edit_positions.size()) {
        std::size_t group_end = group_begin;
        while (group_end + 1 < edit_positions.size()) {
            std::size_t gap = 0;
            for (std::size_t i = edit_positions[group_end] + 1; i < edit_positions[group_end + 1];
                 ++i)
                if (ops[i] == DiffOp::Keep) ++gap;
            if (gap > static_cast<std::size_t>(2 * context)) break;
            ++group_end;
        }

        // Map op positions back to line numbers by walking from the start.
        std::size_t first_op = edit_positions[group_begin];
        std::size_t last_op = edit_positions[group_end];
        int old_line = 1;
        int new_line = 1;
        std::vector<std::pair<int, int>> positions(ops.size() + 1);
        for (std::size_t i = 0; i < ops.size(); ++i) {
            positions[i] = {old_line, new_line};
            if (ops[i] != DiffOp::Ins) ++old_line;
            if (ops[i] != DiffOp::Del) ++new_line;
        }
        positions[ops.size()] = {old_line, new_line};

        std::size_t window_begin = first_op;
        int leading = 0;
        while (window_begin > 0 && leading < context && ops[window_begin - 1] == DiffOp::Keep) {
            --window_begin;
            ++leading;
        }
        std::size_t window_end = last_op + 1;
        int trailing = 0;
        while (window_end < ops.size() && trailing < context && ops[window_end] == DiffOp::Keep) {
            ++window_end;
            ++trailing;
        }

        int old_start = positions[window_begin].first;
        int new_start = positions[window_begin].second;
        int old_count = positions[window_end].first - old_start;
        int new_count = positions[window_end].second - new_start;

        out += "@@ -" + range_header(old_start, old_count) + " +" +
               range_header(new_start, new_count) + " @@\n";

        int oi = old_start;
        int ni = new_start;
        for (std::size_t i = window_begin; i < window_end; ++i) {
            switch (ops[i]) {
                case DiffOp::Keep:
                    emit_line(out, ' ', old_lines[static_cast<std::size_t>(oi - 1)]);
                    ++oi;
                    ++ni;
                    break;
                case DiffOp::Del:
                    emit_line(out, '-', old_lines[static_cast<std::size_t>(oi - 1)]);
                    ++oi;
                    break;
                case DiffOp::Ins:
                    emit_line(out, '+', new_lines[static_cast<std::size_t>(ni - 1)]);
                    ++ni;
                    break;
            }
        }
        group_begin = group_end + 1;
    }
    return out;
}

OperatorDistribution aggregate_operators(const std::vector<OperatorAnnotation>& annotations) {
    OperatorDistribution distribution;
    for (const OperatorAnnotation& annotation : annotations) {
        std::set<std::string> labels;
        for (const RepairOperatorTag& tag : annotation.operators) {
            tag.validate();
            labels.insert(tag.label());
        }
        for (const std::string& label : labels) {
            ++distribution.total[label];
            ++distribution.by_category[annotation.category][label];
        }
        ++distribution.operators_per_patch[annotation.operators.size()];
    }
    return distribution;
}

long nearest_rank_percentile(std::vector<long> values, int percent) {
    if (values.empty()) raise(Errc::InvalidArgument, "percentile of an empty sample");
    if (percent <= 0 || percent > 100)
        raise(Errc::InvalidArgument, "percent must be in (0, 100]");
    std::sort(values.begin(), values.end());
    std::size_t rank =
        (static_cast<std::size_t>(percent) * values.size() + 99) / 100;  // ceil(p/100 * n)
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

}  // namespace regrepair
