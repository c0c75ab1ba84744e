#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/call_parser.hpp"
#include "hubeval/common.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hubeval {

/// Which arguments of one callee take part in matching.
struct MatchRule {
    std::vector<std::string> callee;
    /// Must be present in the candidate and equal to the reference value.
    std::vector<std::string> required;
    /// Compared only when both the candidate and the reference supply them.
    std::vector<std::string> checked_if_present;
    /// Parameter order used to name positional arguments. When empty, the
    /// reference record's api_arguments order is used.
    std::vector<std::string> signature;
    /// Non-empty for rules that encode a named exception (e.g. "pipeline-task").
    std::string exception;

    bool operator==(const MatchRule&) const = default;
};

struct MatchSpec {
    Hub hub = Hub::TorchHub;
    std::vector<MatchRule> rules;

    const MatchRule* rule_for(const std::vector<std::string>& callee) const;
    /// Names of the exception rules.
    std::vector<std::string> special_rules() const;
};

/// TorchHub: torch.hub.load {repo_or_dir, model}. TensorHub: hub.KerasLayer and
/// hub.load {handle}. HuggingFace: pipeline {task} (model checked when both sides
/// give one) plus, when `db` is supplied, one rule per distinct callee among its
/// api_calls requiring {pretrained_model_name_or_path}.
MatchSpec default_spec(Hub hub, const ApiDatabase* db = nullptr);

/// {"hub": "...", "rules": [{"callee": "a.b", "required": [...],
///   "checked_if_present": [...], "signature": [...], "exception": "..."}]}
MatchSpec match_spec_from_json(const ordered_json& j);
ordered_json match_spec_to_json(const MatchSpec& spec);
MatchSpec load_match_spec(const std::filesystem::path& path);

/// Both calls already canonicalized against the reference's argument order.
bool is_subtree_match(const CallNode& candidate, const CallNode& reference, const MatchSpec& spec);

/// Canonicalizes both sides with the rule's signature (or the record's argument
/// order) and applies is_subtree_match. False if canonicalization fails.
bool matches_record(const CallNode& candidate, const ApiRecord& record,
                    const CallNode& record_call, const MatchSpec& spec);

/// Id of the first record (database order) matched by the first matching call
/// (textual order).
std::optional<std::string> find_match(const std::vector<CallNode>& calls, const ApiDatabase& db,
                                      const MatchSpec& spec);

struct Outcome {
    enum class Kind { Correct, WrongApi, Hallucination };
    Kind kind = Kind::Hallucination;
    /// Set for WrongApi.
    std::string matched_id;

    static Outcome correct() { return {Kind::Correct, {}}; }
    static Outcome wrong_api(std::string id) { return {Kind::WrongApi, std::move(id)}; }
    static Outcome hallucination() { return {Kind::Hallucination, {}}; }

    bool operator==(const Outcome&) const = default;
};

std::string_view to_string(Outcome::Kind kind);
Outcome::Kind parse_outcome_kind(std::string_view text);

/// Correct if any extracted call matches the reference; otherwise WrongApi with
/// the first other record matched; otherwise Hallucination. Throws Error if
/// `reference_id` is not in `db`.
Outcome classify(std::string_view candidate_text, std::string_view reference_id,
                 const ApiDatabase& db, const MatchSpec& spec);

/// Same, over calls that were already extracted.
Outcome classify_calls(const std::vector<CallNode>& calls, std::string_view reference_id,
                       const ApiDatabase& db, const MatchSpec& spec);

}  // namespace hubeval
