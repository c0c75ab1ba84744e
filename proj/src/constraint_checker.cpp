#include "hubeval/constraint_checker.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace hubeval {

namespace {

bool metric_name_matches(std::string_view stored, const std::string& wanted_norm) {
    if (normalize_metric_name(stored) == wanted_norm) return true;
    const auto slash = stored.rfind(" / ");
    return slash != std::string_view::npos &&
           normalize_metric_name(stored.substr(slash + 3)) == wanted_norm;
}

bool compare(double actual, Comparator c, double threshold) {
    switch (c) {
    case Comparator::AtLeast: return actual >= threshold;
    case Comparator::AtMost: return actual <= threshold;
    case Comparator::Greater: return actual > threshold;
    case Comparator::Less: return actual < threshold;
    }
    return false;
}

}  // namespace

std::string_view to_string(Comparator c) {
    switch (c) {
    case Comparator::AtLeast: return ">=";
    case Comparator::AtMost: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::Less: return "<";
    }
    return ">=";
}

Comparator parse_comparator(std::string_view text) {
    const std::string t = trim(text);
    if (t == ">=" || t == "≥") return Comparator::AtLeast;
    if (t == "<=" || t == "≤") return Comparator::AtMost;
    if (t == ">") return Comparator::Greater;
    if (t == "<") return Comparator::Less;
    throw Error("unknown comparator '" + t + "'");
}

std::string_view to_string(ConstraintVerdict::Kind kind) {
    switch (kind) {
    case ConstraintVerdict::Kind::Satisfied: return "satisfied";
    case ConstraintVerdict::Kind::Violated: return "violated";
    case ConstraintVerdict::Kind::Unknown: return "unknown";
    }
    return "unknown";
}

void Constraint::validate() const {
    if (trim(metric_name).empty()) throw Error("constraint metric name must not be empty");
    if (trim(dataset_name).empty()) throw Error("constraint dataset name must not be empty");
    if (!std::isfinite(threshold)) throw Error("constraint threshold must be finite");
}

std::string normalize_metric_name(std::string_view name) {
    std::string out;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::isalnum(u)) out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

ConstraintVerdict satisfies(const ApiRecord& record, const Constraint& constraint) {
    const std::string dataset = normalize_metric_name(constraint.dataset_name);
    const std::string metric = normalize_metric_name(constraint.metric_name);
    for (const auto& g : record.performance) {
        if (normalize_metric_name(g.dataset) != dataset) continue;
        for (const auto& m : g.metrics) {
            if (!metric_name_matches(m.name, metric) || !std::isfinite(m.value)) continue;
            return ConstraintVerdict{compare(m.value, constraint.comparator, constraint.threshold)
                                         ? ConstraintVerdict::Kind::Satisfied
                                         : ConstraintVerdict::Kind::Violated,
                                     m.value};
        }
    }
    return ConstraintVerdict{ConstraintVerdict::Kind::Unknown, 0.0};
}

MetricFilterResult filter_with_metrics(const ApiDatabase& db, std::string_view metric_name) {
    const std::string wanted = normalize_metric_name(metric_name);
    std::vector<ApiRecord> kept;
    for (const auto& r : db.records()) {
        bool has = false;
        for (const auto& g : r.performance) {
            for (const auto& m : g.metrics) {
                has = has || (std::isfinite(m.value) &&
                              normalize_metric_name(m.name).find(wanted) != std::string::npos);
            }
        }
        if (has) kept.push_back(r);
    }
    return MetricFilterResult{ApiDatabase(db.hub(), std::move(kept)), db.size()};
}

std::map<std::string, Constraint> parse_constraints(std::string_view jsonl) {
    std::map<std::string, Constraint> out;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("_header")) continue;
            Constraint c;
            c.metric_name = j.at("metric").get<std::string>();
            c.dataset_name = j.at("dataset").get<std::string>();
            c.comparator = parse_comparator(j.at("comparator").get<std::string>());
            c.threshold = j.at("threshold").get<double>();
            c.validate();
            const auto id = j.at("example_id").get<std::string>();
            if (!out.emplace(id, std::move(c)).second) {
                throw Error("duplicate constraint for example '" + id + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error("constraints line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("constraints line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::map<std::string, Constraint> load_constraints(const std::filesystem::path& path) {
    return parse_constraints(read_file(path));
}

ConstraintReport constraint_evaluate(const std::vector<EvalExample>& examples,
                                     const std::map<std::string, Constraint>& constraints,
                                     const CandidateSet& candidates, const ApiDatabase& db,
                                     const MatchSpec& spec, EvalSetting setting) {
    for (const auto& ex : examples) {
        if (constraints.find(ex.id) == constraints.end()) {
            throw Error("no constraint for example '" + ex.id + "'");
        }
    }
    ConstraintReport report;
    report.overall = evaluate(examples, candidates, db, spec, std::move(setting));
    report.verdicts.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (report.overall.outcomes[i].outcome.kind != Outcome::Kind::Correct) {
            report.verdicts.emplace_back(std::nullopt);
            continue;
        }
        const auto verdict =
            satisfies(db.at(examples[i].reference_id), constraints.at(examples[i].id));
        if (verdict.satisfied()) ++report.constraint_correct;
        report.verdicts.emplace_back(verdict);
    }
    return report;
}

ordered_json constraint_report_to_json(const ConstraintReport& report, const ordered_json& header) {
    ordered_json j = report_to_json(report.overall, header);
    j["constraint"] = {{"correct", report.constraint_correct},
                       {"total", report.overall.counts.total()},
                       {"accuracy", round2(report.constraint_pct())}};
    auto& outcomes = j["outcomes"];
    for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
        const auto& v = report.verdicts[i];
        outcomes[i]["constraint"] = v ? std::string(to_string(v->kind)) : std::string("not_evaluated");
        if (v && v->kind != ConstraintVerdict::Kind::Unknown) outcomes[i]["actual"] = v->actual;
    }
    return j;
}

}  // namespace hubeval
