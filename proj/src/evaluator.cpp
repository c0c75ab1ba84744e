#include "hubeval/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hubeval {

namespace {

std::string_view mode_name(EvalMode mode) { return mode == EvalMode::Ast ? "ast" : "domain_only"; }

EvalMode parse_mode(std::string_view s) {
    if (s == "ast") return EvalMode::Ast;
    if (s == "domain_only") return EvalMode::DomainOnly;
    throw Error("unknown evaluation mode '" + std::string(s) + "'");
}

// Everything that can fail is checked before any parallel work starts.
void check_inputs(const std::vector<EvalExample>& examples, const CandidateSet& candidates,
                  const ApiDatabase& db) {
    for (const auto& ex : examples) {
        if (candidates.find(ex.id) == nullptr) {
            throw Error("no candidate for example '" + ex.id + "'");
        }
        if (!db.contains(ex.reference_id)) {
            throw Error("example '" + ex.id + "': unknown reference id '" + ex.reference_id + "'");
        }
    }
}

Outcome classify_example(const EvalExample& ex, const CandidateSet& candidates,
                         const ApiDatabase& db, const MatchSpec& spec) {
    const Candidate* c = candidates.find(ex.id);
    if (!c->ok) return Outcome::hallucination();
    return classify(c->text, ex.reference_id, db, spec);
}

EvalReport assemble(const std::vector<EvalExample>& examples, std::vector<Outcome> outcomes,
                    const ApiDatabase& db, EvalSetting setting, EvalMode mode) {
    EvalReport report;
    report.setting = std::move(setting);
    report.hub = db.hub();
    report.mode = mode;
    report.outcomes.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        report.counts.add(outcomes[i].kind);
        report.outcomes.push_back(ExampleOutcome{examples[i].id, std::move(outcomes[i])});
    }
    return report;
}

std::string fold(std::string_view s) { return to_lower(trim(s)); }

}  // namespace

void OutcomeCounts::add(Outcome::Kind kind) {
    switch (kind) {
    case Outcome::Kind::Correct: ++correct; break;
    case Outcome::Kind::WrongApi: ++wrong_api; break;
    case Outcome::Kind::Hallucination: ++hallucination; break;
    }
}

double percent(std::size_t part, std::size_t total) {
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(part) / static_cast<double>(total);
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

EvalReport evaluate_serial(const std::vector<EvalExample>& examples, const CandidateSet& candidates,
                           const ApiDatabase& db, const MatchSpec& spec, EvalSetting setting) {
    check_inputs(examples, candidates, db);
    std::vector<Outcome> outcomes;
    outcomes.reserve(examples.size());
    for (const auto& ex : examples) outcomes.push_back(classify_example(ex, candidates, db, spec));
    return assemble(examples, std::move(outcomes), db, std::move(setting), EvalMode::Ast);
}

EvalReport evaluate(const std::vector<EvalExample>& examples, const CandidateSet& candidates,
                    const ApiDatabase& db, const MatchSpec& spec, EvalSetting setting) {
    check_inputs(examples, candidates, db);
    std::vector<Outcome> outcomes(examples.size());
    const auto n = static_cast<std::ptrdiff_t>(examples.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        outcomes[idx] = classify_example(examples[idx], candidates, db, spec);
    }
    return assemble(examples, std::move(outcomes), db, std::move(setting), EvalMode::Ast);
}

std::string candidate_domain(std::string_view candidate_text) {
    if (const auto structured = parse_structured_output(candidate_text);
        structured && structured->domain) {
        return trim(*structured->domain);
    }
    return trim(candidate_text);
}

EvalReport evaluate_domain_only(const std::vector<EvalExample>& examples,
                                const CandidateSet& candidates, const ApiDatabase& db,
                                EvalSetting setting) {
    check_inputs(examples, candidates, db);
    std::unordered_set<std::string> known;
    for (auto d : hub_domains(db.hub())) known.insert(fold(d));
    for (const auto& r : db.records()) known.insert(fold(r.domain));

    std::vector<Outcome> outcomes;
    outcomes.reserve(examples.size());
    for (const auto& ex : examples) {
        const Candidate* c = candidates.find(ex.id);
        if (!c->ok) {
            outcomes.push_back(Outcome::hallucination());
            continue;
        }
        const std::string domain = fold(candidate_domain(c->text));
        if (domain == fold(db.at(ex.reference_id).domain)) {
            outcomes.push_back(Outcome::correct());
        } else if (!domain.empty() && known.count(domain) != 0) {
            std::string first_with_domain;
            for (const auto& r : db.records()) {
                if (fold(r.domain) == domain) {
                    first_with_domain = r.id;
                    break;
                }
            }
            outcomes.push_back(Outcome::wrong_api(std::move(first_with_domain)));
        } else {
            outcomes.push_back(Outcome::hallucination());
        }
    }
    return assemble(examples, std::move(outcomes), db, std::move(setting), EvalMode::DomainOnly);
}

ordered_json report_to_json(const EvalReport& report, const ordered_json& header) {
    ordered_json j = ordered_json::object();
    if (header.is_object()) j["_header"] = header;
    j["setting"] = {{"model", report.setting.model}, {"retriever", report.setting.retriever}};
    j["hub"] = std::string(to_string(report.hub));
    j["mode"] = std::string(mode_name(report.mode));
    j["counts"] = {{"correct", report.counts.correct},
                   {"wrong_api", report.counts.wrong_api},
                   {"hallucination", report.counts.hallucination},
                   {"total", report.counts.total()}};
    j["percentages"] = {{"overall", round2(report.overall_pct())},
                        {"hallucination", round2(report.hallucination_pct())},
                        {"error", round2(report.error_pct())}};
    ordered_json outcomes = ordered_json::array();
    for (const auto& o : report.outcomes) {
        ordered_json e = ordered_json::object();
        e["example_id"] = o.example_id;
        e["outcome"] = std::string(to_string(o.outcome.kind));
        if (o.outcome.kind == Outcome::Kind::WrongApi) e["matched_api_id"] = o.outcome.matched_id;
        outcomes.push_back(std::move(e));
    }
    j["outcomes"] = std::move(outcomes);
    return j;
}

EvalReport report_from_json(const ordered_json& j) {
    try {
        EvalReport r;
        r.setting.model = j.at("setting").at("model").get<std::string>();
        r.setting.retriever = j.at("setting").at("retriever").get<std::string>();
        r.hub = parse_hub(j.at("hub").get<std::string>());
        r.mode = parse_mode(j.value("mode", std::string("ast")));
        for (const auto& e : j.at("outcomes")) {
            ExampleOutcome o;
            o.example_id = e.at("example_id").get<std::string>();
            o.outcome.kind = parse_outcome_kind(e.at("outcome").get<std::string>());
            o.outcome.matched_id = e.value("matched_api_id", std::string{});
            r.counts.add(o.outcome.kind);
            r.outcomes.push_back(std::move(o));
        }
        const auto& c = j.at("counts");
        if (c.at("correct").get<std::size_t>() != r.counts.correct ||
            c.at("wrong_api").get<std::size_t>() != r.counts.wrong_api ||
            c.at("hallucination").get<std::size_t>() != r.counts.hallucination) {
            throw Error("report counts disagree with its outcomes");
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("report: ") + e.what());
    }
}

EvalReport load_report(const std::filesystem::path& path) {
    try {
        return report_from_json(ordered_json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

ComparisonTable compare_settings(std::span<const EvalReport> reports) {
    ComparisonTable table;
    std::set<std::string> reference_ids;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::set<std::string> ids;
        for (const auto& o : reports[i].outcomes) ids.insert(o.example_id);
        if (i == 0) {
            reference_ids = std::move(ids);
        } else if (ids != reference_ids) {
            throw Error("report " + std::to_string(i + 1) +
                        " covers a different example set than report 1");
        }
        const auto& r = reports[i];
        table.rows.push_back(ComparisonRow{r.setting, r.hub, r.counts.total(), r.overall_pct(),
                                           r.hallucination_pct(), r.error_pct()});
    }
    return table;
}

ordered_json ComparisonTable::to_json() const {
    ordered_json j = ordered_json::object();
    j["columns"] = {"model", "retriever", "hub", "examples", "overall", "hallucination", "error"};
    ordered_json out = ordered_json::array();
    for (const auto& r : rows) {
        out.push_back({{"model", r.setting.model},
                       {"retriever", r.setting.retriever},
                       {"hub", std::string(to_string(r.hub))},
                       {"examples", r.examples},
                       {"overall", round2(r.overall)},
                       {"hallucination", round2(r.hallucination)},
                       {"error", round2(r.error)}});
    }
    j["rows"] = std::move(out);
    return j;
}

std::string ComparisonTable::to_text() const {
    std::size_t model_w = 5;
    std::size_t retr_w = 9;
    for (const auto& r : rows) {
        model_w = std::max(model_w, r.setting.model.size());
        retr_w = std::max(retr_w, r.setting.retriever.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(model_w) + 2) << "model"
        << std::setw(static_cast<int>(retr_w) + 2) << "retriever" << std::setw(13) << "hub"
        << std::right << std::setw(9) << "overall" << std::setw(9) << "hallu" << std::setw(9)
        << "err" << std::setw(7) << "n" << '\n';
    out << std::fixed << std::setprecision(2);
    for (const auto& r : rows) {
        out << std::left << std::setw(static_cast<int>(model_w) + 2) << r.setting.model
            << std::setw(static_cast<int>(retr_w) + 2) << r.setting.retriever << std::setw(13)
            << to_string(r.hub) << std::right << std::setw(9) << r.overall << std::setw(9)
            << r.hallucination << std::setw(9) << r.error << std::setw(7) << r.examples << '\n';
    }
    return out.str();
}

double top1_recall(const std::vector<EvalExample>& examples, const Retriever& retriever) {
    if (examples.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& ex : examples) {
        const auto res = retriever.retrieve(ex, 1);
        if (const ScoredDoc* top = res.top(); top != nullptr && top->id == ex.reference_id) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(examples.size());
}

}  // namespace hubeval
