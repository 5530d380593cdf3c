#include "regrepair/metrics.hpp"

#include "regrepair/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace regrepair {

std::string_view correctness_verdict_name(CorrectnessVerdict verdict) {
    return verdict == CorrectnessVerdict::Correct ? "correct" : "plausible_but_incorrect";
}

CorrectnessVerdict correctness_verdict_from_name(std::string_view name) {
    if (name == "correct") return CorrectnessVerdict::Correct;
    if (name == "plausible_but_incorrect") return CorrectnessVerdict::PlausibleButIncorrect;
    raise(Errc::InvalidArgument, "unknown correctness verdict '" + std::string(name) + "'");
}

std::string format_percent(long num, long den) {
    if (den == 0) return "N/A";
    // Half-up to two decimals, in integer arithmetic: hundredths of a percent.
    long long hundredths = (static_cast<long long>(num) * 10000 + den / 2) / den;
    std::ostringstream out;
    out << hundredths / 100 << '.';
    long long frac = hundredths % 100;
    out << static_cast<char>('0' + frac / 10) << static_cast<char>('0' + frac % 10) << '%';
    return out.str();
}

RepairSummary RepairSummary::from_counts(std::string method_label,
                                         long plausible,
                                         long correct,
                                         long dataset_size,
                                         Decimal total_cost) {
    if (correct > plausible)
        raise(Errc::InvalidArgument, "correct count exceeds plausible count");
    if (dataset_size <= 0) raise(Errc::InvalidArgument, "dataset size must be positive");
    RepairSummary summary;
    summary.method_label = std::move(method_label);
    summary.plausible = plausible;
    summary.correct = correct;
    summary.dataset_size = dataset_size;
    summary.total_cost = total_cost;
    return summary;
}

std::string RepairSummary::pr_percent() const {
    return format_percent(plausible, dataset_size);
}

std::string RepairSummary::cr_percent() const {
    return format_percent(correct, dataset_size);
}

std::string RepairSummary::precision_percent() const {
    return plausible == 0 ? "N/A" : format_percent(correct, plausible);
}

RepairSummary summarize(const std::string& method_label,
                        const std::vector<RepairTrace>& traces,
                        const std::vector<CorrectnessAnnotation>& annotations,
                        long dataset_size) {
    std::set<std::string> plausible_bugs;
    Decimal total_cost;
    for (const RepairTrace& trace : traces) {
        if (trace.plausible_patch) plausible_bugs.insert(trace.bug_id);
        total_cost += trace.total_cost;
    }
    long correct = 0;
    for (const CorrectnessAnnotation& annotation : annotations) {
        if (!plausible_bugs.contains(annotation.bug_id))
            raise(Errc::DanglingAnnotation,
                  "annotation for '" + annotation.bug_id + "' has no plausible trace");
        if (annotation.verdict == CorrectnessVerdict::Correct) ++correct;
    }
    return RepairSummary::from_counts(method_label,
                                      static_cast<long>(plausible_bugs.size()), correct,
                                      dataset_size, total_cost);
}

namespace {

// correct desc, then precision desc with N/A last, then label for stability.
bool summary_before(const RepairSummary& lhs, const RepairSummary& rhs) {
    if (lhs.correct != rhs.correct) return lhs.correct > rhs.correct;
    bool lhs_na = lhs.plausible == 0;
    bool rhs_na = rhs.plausible == 0;
    if (lhs_na != rhs_na) return rhs_na;
    if (!lhs_na) {
        // correct/plausible comparison by cross-multiplication, exact.
        long long lhs_val = static_cast<long long>(lhs.correct) * rhs.plausible;
        long long rhs_val = static_cast<long long>(rhs.correct) * lhs.plausible;
        if (lhs_val != rhs_val) return lhs_val > rhs_val;
    }
    return lhs.method_label < rhs.method_label;
}

}  // namespace

std::string render_report(std::vector<RepairSummary> summaries, ReportFormat format) {
    if (summaries.empty()) raise(Errc::InvalidArgument, "no summaries to render");
    std::stable_sort(summaries.begin(), summaries.end(), summary_before);

    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        out << "method,plausible,plausible_rate,correct,correct_rate,precision,total_cost\n";
        for (const RepairSummary& s : summaries) {
            std::string label = s.method_label;
            if (label.find(',') != std::string::npos) label = '"' + label + '"';
            out << label << ',' << s.plausible << ',' << s.pr_percent() << ',' << s.correct
                << ',' << s.cr_percent() << ',' << s.precision_percent() << ','
                << s.total_cost.to_string() << '\n';
        }
    } else {
        out << "| Method | Plausible (PR) | Correct (CR) | Precision | Cost |\n";
        out << "|---|---|---|---|---|\n";
        for (const RepairSummary& s : summaries)
            out << "| " << s.method_label << " | " << s.plausible << " (" << s.pr_percent()
                << ") | " << s.correct << " (" << s.cr_percent() << ") | "
                << s.precision_percent() << " | " << s.total_cost.to_string() << " |\n";
    }
    return out.str();
}

std::set<std::string> union_correct_bugs(
    const std::vector<std::vector<CorrectnessAnnotation>>& annotation_sets) {
    std::set<std::string> bugs;
    for (const auto& annotations : annotation_sets)
        for (const CorrectnessAnnotation& annotation : annotations)
            if (annotation.verdict == CorrectnessVerdict::Correct)
                bugs.insert(annotation.bug_id);
    return bugs;
}

}  // namespace regrepair
