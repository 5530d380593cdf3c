#pragma once

#include "regrepair/decimal.hpp"
#include "regrepair/repair.hpp"

#include <set>
#include <string>
#include <vector>

namespace regrepair {

enum class CorrectnessVerdict { Correct, PlausibleButIncorrect };
std::string_view correctness_verdict_name(CorrectnessVerdict verdict);
CorrectnessVerdict correctness_verdict_from_name(std::string_view name);

/// Manual judgment of a plausible patch; produced by a human reviewer and
/// consumed as an annotation file, never computed.
struct CorrectnessAnnotation {
    std::string bug_id;
    CorrectnessVerdict verdict{CorrectnessVerdict::Correct};
    std::string rationale;
};

struct RepairSummary {
    std::string method_label;
    long plausible{0};
    long correct{0};
    long dataset_size{0};
    Decimal total_cost;

    static RepairSummary from_counts(std::string method_label,
                                     long plausible,
                                     long correct,
                                     long dataset_size,
                                     Decimal total_cost = Decimal::zero());

    std::string pr_percent() const;         // plausible / dataset_size
    std::string cr_percent() const;         // correct / dataset_size
    std::string precision_percent() const;  // correct / plausible, "N/A" when plausible = 0
};

/// Percent with two decimals, half-up ("33.33%"). den = 0 yields "N/A".
std::string format_percent(long num, long den);

/// Counts plausible traces and correct annotations. Every annotation must
/// reference a bug with a plausible trace (DanglingAnnotation otherwise).
RepairSummary summarize(const std::string& method_label,
                        const std::vector<RepairTrace>& traces,
                        const std::vector<CorrectnessAnnotation>& annotations,
                        long dataset_size);

enum class ReportFormat { Csv, Markdown };

/// Rows ordered by correct desc, then precision desc (N/A last). "N/A" is
/// rendered literally.
std::string render_report(std::vector<RepairSummary> summaries, ReportFormat format);

/// Bug ids judged Correct in at least one of the annotation sets.
std::set<std::string> union_correct_bugs(
    const std::vector<std::vector<CorrectnessAnnotation>>& annotation_sets);

}  // namespace regrepair
