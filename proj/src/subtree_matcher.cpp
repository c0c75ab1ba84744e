#include "hubeval/subtree_matcher.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hubeval {

namespace {

std::vector<std::string> split_path(std::string_view dotted) {
    std::vector<std::string> out;
    std::stringstream ss{std::string(dotted)};
    std::string seg;
    while (std::getline(ss, seg, '.')) out.push_back(trim(seg));
    return out;
}

std::string join_path(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& s : path) out += (out.empty() ? "" : ".") + s;
    return out;
}

std::vector<std::string> string_list(const ordered_json& j, std::string_view key) {
    std::vector<std::string> out;
    const std::string k(key);
    if (!j.contains(k)) return out;
    if (!j[k].is_array()) throw Error("match spec: '" + k + "' must be a string array");
    for (const auto& v : j[k]) {
        if (!v.is_string()) throw Error("match spec: '" + k + "' must be a string array");
        out.push_back(v.get<std::string>());
    }
    return out;
}

void check_rule(const MatchRule& rule) {
    if (rule.callee.empty() || std::any_of(rule.callee.begin(), rule.callee.end(),
                                           [](const std::string& s) { return s.empty(); })) {
        throw Error("match spec: rule callee must be a non-empty dotted path");
    }
    std::set<std::string> seen;
    for (const auto& name : rule.required) {
        if (!seen.insert(name).second) {
            throw Error("match spec: duplicate required argument '" + name + "' for '" +
                        join_path(rule.callee) + "'");
        }
    }
}

MatchRule pipeline_rule() {
    return MatchRule{{"pipeline"}, {"task"}, {"model"}, {"task", "model"}, "pipeline-task"};
}

const std::vector<std::string>& argument_order(const MatchRule& rule, const ApiRecord& record,
                                               std::vector<std::string>& scratch) {
    if (!rule.signature.empty()) return rule.signature;
    scratch = record.argument_names();
    return scratch;
}

}  // namespace

const MatchRule* MatchSpec::rule_for(const std::vector<std::string>& callee) const {
    for (const auto& r : rules) {
        if (r.callee == callee) return &r;
    }
    return nullptr;
}

std::vector<std::string> MatchSpec::special_rules() const {
    std::vector<std::string> out;
    for (const auto& r : rules) {
        if (!r.exception.empty()) out.push_back(r.exception);
    }
    return out;
}

MatchSpec default_spec(Hub hub, const ApiDatabase* db) {
    MatchSpec spec;
    spec.hub = hub;
    switch (hub) {
    case Hub::TorchHub:
        spec.rules.push_back(MatchRule{{"torch", "hub", "load"},
                                       {"repo_or_dir", "model"},
                                       {},
                                       {"repo_or_dir", "model"},
                                       {}});
        break;
    case Hub::TensorHub:
        spec.rules.push_back(MatchRule{{"hub", "KerasLayer"}, {"handle"}, {}, {"handle"}, {}});
        spec.rules.push_back(MatchRule{{"hub", "load"}, {"handle"}, {}, {"handle"}, {}});
        break;
    case Hub::HuggingFace:
        spec.rules.push_back(pipeline_rule());
        if (db != nullptr) {
            for (std::size_t i = 0; i < db->size(); ++i) {
                const auto& callee = db->call_of(i).callee;
                if (spec.rule_for(callee) != nullptr) continue;
                spec.rules.push_back(MatchRule{callee,
                                               {"pretrained_model_name_or_path"},
                                               {},
                                               {"pretrained_model_name_or_path"},
                                               {}});
            }
        }
        break;
    }
    return spec;
}

MatchSpec match_spec_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array()) {
        throw Error("match spec: expected an object with a 'rules' array");
    }
    MatchSpec spec;
    if (j.contains("hub")) spec.hub = parse_hub(j["hub"].get<std::string>());
    for (const auto& r : j["rules"]) {
        if (!r.is_object() || !r.contains("callee") || !r["callee"].is_string()) {
            throw Error("match spec: every rule needs a 'callee' string");
        }
        MatchRule rule;
        rule.callee = split_path(r["callee"].get<std::string>());
        rule.required = string_list(r, "required");
        rule.checked_if_present = string_list(r, "checked_if_present");
        rule.signature = string_list(r, "signature");
        if (r.contains("exception")) rule.exception = r["exception"].get<std::string>();
        check_rule(rule);
        spec.rules.push_back(std::move(rule));
    }
    return spec;
}

ordered_json match_spec_to_json(const MatchSpec& spec) {
    ordered_json j = ordered_json::object();
    j["hub"] = std::string(to_string(spec.hub));
    ordered_json rules = ordered_json::array();
    for (const auto& r : spec.rules) {
        ordered_json o = ordered_json::object();
        o["callee"] = join_path(r.callee);
        o["required"] = r.required;
        o["checked_if_present"] = r.checked_if_present;
        o["signature"] = r.signature;
        if (!r.exception.empty()) o["exception"] = r.exception;
        rules.push_back(std::move(o));
    }
    j["rules"] = std::move(rules);
    return j;
}

MatchSpec load_match_spec(const std::filesystem::path& path) {
    try {
        return match_spec_from_json(ordered_json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

bool is_subtree_match(const CallNode& candidate, const CallNode& reference, const MatchSpec& spec) {
    const MatchRule* rule = spec.rule_for(candidate.callee);
    if (rule == nullptr || candidate.callee != reference.callee) return false;
    for (const auto& name : rule->required) {
        const Value* got = candidate.keyword_value(name);
        const Value* want = reference.keyword_value(name);
        if (got == nullptr && want == nullptr) continue;
        if (got == nullptr || want == nullptr || !values_match(*got, *want)) return false;
    }
    for (const auto& name : rule->checked_if_present) {
        const Value* got = candidate.keyword_value(name);
        const Value* want = reference.keyword_value(name);
        if (got != nullptr && want != nullptr && !values_match(*got, *want)) return false;
    }
    return true;
}

bool matches_record(const CallNode& candidate, const ApiRecord& record, const CallNode& record_call,
                    const MatchSpec& spec) {
    const MatchRule* rule = spec.rule_for(candidate.callee);
    if (rule == nullptr || candidate.callee != record_call.callee) return false;
    std::vector<std::string> scratch;
    const auto& order = argument_order(*rule, record, scratch);
    try {
        return is_subtree_match(canonicalize(candidate, order), canonicalize(record_call, order),
                                spec);
    } catch (const Error&) {
        return false;
    }
}

std::optional<std::string> find_match(const std::vector<CallNode>& calls, const ApiDatabase& db,
                                      const MatchSpec& spec) {
    for (const auto& call : calls) {
        for (std::size_t i = 0; i < db.size(); ++i) {
            if (matches_record(call, db.records()[i], db.call_of(i), spec)) {
                return db.records()[i].id;
            }
        }
    }
    return std::nullopt;
}

std::string_view to_string(Outcome::Kind kind) {
    switch (kind) {
    case Outcome::Kind::Correct: return "correct";
    case Outcome::Kind::WrongApi: return "wrong_api";
    case Outcome::Kind::Hallucination: return "hallucination";
    }
    return "unknown";
}

Outcome::Kind parse_outcome_kind(std::string_view text) {
    if (text == "correct") return Outcome::Kind::Correct;
    if (text == "wrong_api") return Outcome::Kind::WrongApi;
    if (text == "hallucination") return Outcome::Kind::Hallucination;
    throw Error("unknown outcome '" + std::string(text) + "'");
}

Outcome classify_calls(const std::vector<CallNode>& calls, std::string_view reference_id,
                       const ApiDatabase& db, const MatchSpec& spec) {
    const auto ref_index = db.index_of(reference_id);
    if (!ref_index) throw Error("unknown reference id '" + std::string(reference_id) + "'");
    const ApiRecord& reference = db.records()[*ref_index];
    const CallNode& reference_call = db.call_of(*ref_index);
    for (const auto& call : calls) {
        if (matches_record(call, reference, reference_call, spec)) return Outcome::correct();
    }
    if (auto other = find_match(calls, db, spec)) return Outcome::wrong_api(std::move(*other));
    return Outcome::hallucination();
}

Outcome classify(std::string_view candidate_text, std::string_view reference_id,
                 const ApiDatabase& db, const MatchSpec& spec) {
    if (!db.contains(reference_id)) {
        throw Error("unknown reference id '" + std::string(reference_id) + "'");
    }
    return classify_calls(parse_calls(candidate_text), reference_id, db, spec);
}

}  // namespace hubeval
