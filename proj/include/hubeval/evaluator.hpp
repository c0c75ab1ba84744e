#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/eval_example.hpp"
#include "hubeval/model_client.hpp"
#include "hubeval/retriever.hpp"
#include "hubeval/subtree_matcher.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hubeval {

struct ExampleOutcome {
    std::string example_id;
    Outcome outcome;

    bool operator==(const ExampleOutcome&) const = default;
};

struct OutcomeCounts {
    std::size_t correct = 0;
    std::size_t wrong_api = 0;
    std::size_t hallucination = 0;

    std::size_t total() const { return correct + wrong_api + hallucination; }
    void add(Outcome::Kind kind);
    bool operator==(const OutcomeCounts&) const = default;
};

/// 100 * part / total; 0 when total is 0.
double percent(std::size_t part, std::size_t total);

/// Rendering precision for reports.
double round2(double value);

struct EvalSetting {
    std::string model;
    std::string retriever;

    bool operator==(const EvalSetting&) const = default;
};

enum class EvalMode { Ast, DomainOnly };

/// Counts are the source of truth; percentages are derived when rendered.
struct EvalReport {
    EvalSetting setting;
    Hub hub = Hub::TorchHub;
    EvalMode mode = EvalMode::Ast;
    OutcomeCounts counts;
    std::vector<ExampleOutcome> outcomes;

    double overall_pct() const { return percent(counts.correct, counts.total()); }
    double hallucination_pct() const { return percent(counts.hallucination, counts.total()); }
    double error_pct() const { return percent(counts.wrong_api, counts.total()); }

    bool operator==(const EvalReport&) const = default;
};

/// Classifies every example with the sub-tree matcher; failed candidates count as
/// Hallucination. Examples are classified in parallel (OpenMP) and outcomes are
/// stored in input order. Throws Error naming the first example with no candidate
/// or an unknown reference.
EvalReport evaluate(const std::vector<EvalExample>& examples, const CandidateSet& candidates,
                    const ApiDatabase& db, const MatchSpec& spec, EvalSetting setting = {});

/// Single-threaded reference for evaluate().
EvalReport evaluate_serial(const std::vector<EvalExample>& examples, const CandidateSet& candidates,
                           const ApiDatabase& db, const MatchSpec& spec, EvalSetting setting = {});

/// Domain extracted from a `<domain>` tag when present, else the whole trimmed text.
std::string candidate_domain(std::string_view candidate_text);

/// Correct iff the candidate's domain equals the reference record's domain
/// (trimmed, case-folded); another known domain is WrongApi; anything else is
/// Hallucination. Known domains are the hub's published list plus the domains
/// present in `db`.
EvalReport evaluate_domain_only(const std::vector<EvalExample>& examples,
                                const CandidateSet& candidates, const ApiDatabase& db,
                                EvalSetting setting = {});

/// `{setting, hub, mode, counts, percentages, outcomes}`, preceded by `_header`
/// when `header` is an object.
ordered_json report_to_json(const EvalReport& report, const ordered_json& header = {});
EvalReport report_from_json(const ordered_json& j);
EvalReport load_report(const std::filesystem::path& path);

struct ComparisonRow {
    EvalSetting setting;
    Hub hub = Hub::TorchHub;
    std::size_t examples = 0;
    double overall = 0.0;
    double hallucination = 0.0;
    double error = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;

    ordered_json to_json() const;
    std::string to_text() const;
};

/// One row per report, in the order given. Throws Error unless all reports cover
/// the same example ids.
ComparisonTable compare_settings(std::span<const EvalReport> reports);

/// Fraction of examples whose top-1 retrieved id is the reference id.
double top1_recall(const std::vector<EvalExample>& examples, const Retriever& retriever);

}  // namespace hubeval
