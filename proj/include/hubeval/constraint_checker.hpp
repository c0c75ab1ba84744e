#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/evaluator.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hubeval {

enum class Comparator { AtLeast, AtMost, Greater, Less };

std::string_view to_string(Comparator c);
/// ">=", "<=", ">", "<" (also "≥", "≤").
Comparator parse_comparator(std::string_view text);

/// A user-stated requirement such as "ImageNet top-1 accuracy >= 80". Accuracy
/// thresholds are percentages; parameter counts are absolute.
struct Constraint {
    std::string metric_name;
    std::string dataset_name;
    Comparator comparator = Comparator::AtLeast;
    double threshold = 0.0;

    void validate() const;
    bool operator==(const Constraint&) const = default;
};

struct ConstraintVerdict {
    enum class Kind { Satisfied, Violated, Unknown };
    Kind kind = Kind::Unknown;
    /// Reported value for Satisfied and Violated.
    double actual = 0.0;

    bool satisfied() const { return kind == Kind::Satisfied; }
};

std::string_view to_string(ConstraintVerdict::Kind kind);

/// Lowercase, alphanumerics only: "mAP@0.5 (%)" and "map@0.5" both become "map05".
std::string normalize_metric_name(std::string_view name);

/// Looks up the first performance group whose dataset matches and which defines
/// the metric (whole flattened name or its last " / " segment). Unknown when absent.
ConstraintVerdict satisfies(const ApiRecord& record, const Constraint& constraint);

struct MetricFilterResult {
    ApiDatabase subset;
    std::size_t total = 0;

    double retained_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(subset.size()) / static_cast<double>(total);
    }
};

/// Records with at least one metric whose normalized name contains the normalized
/// `metric_name` (so "accuracy" keeps "Top-1 Accuracy").
MetricFilterResult filter_with_metrics(const ApiDatabase& db, std::string_view metric_name);

/// JSON Lines of {example_id, metric, dataset, comparator, threshold}.
std::map<std::string, Constraint> parse_constraints(std::string_view jsonl);
std::map<std::string, Constraint> load_constraints(const std::filesystem::path& path);

struct ConstraintReport {
    EvalReport overall;
    /// Per example, aligned with overall.outcomes; nullopt when the example was not Correct.
    std::vector<std::optional<ConstraintVerdict>> verdicts;
    std::size_t constraint_correct = 0;

    double constraint_pct() const { return percent(constraint_correct, overall.counts.total()); }
};

/// An example counts toward constraint accuracy iff it is Correct and its
/// reference record satisfies the example's constraint. Unknown never counts.
/// Throws Error naming the first example without a constraint.
ConstraintReport constraint_evaluate(const std::vector<EvalExample>& examples,
                                     const std::map<std::string, Constraint>& constraints,
                                     const CandidateSet& candidates, const ApiDatabase& db,
                                     const MatchSpec& spec, EvalSetting setting = {});

/// The evaluator report plus {"constraint": {correct, total, accuracy}} and a
/// per-outcome "constraint" field.
ordered_json constraint_report_to_json(const ConstraintReport& report,
                                       const ordered_json& header = {});

}  // namespace hubeval
