#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/model_client.hpp"
#include "hubeval/prompt_builder.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace hubeval {

struct InstructionPair {
    enum class Source { Generated, Handwritten };

    std::string instruction;
    std::string reference_id;
    Source source = Source::Generated;
    /// Backend label for Generated pairs.
    std::string label;
    /// Any of "api_name_leak", "regenerated".
    std::vector<std::string> flags;

    bool has_flag(std::string_view flag) const;
    bool operator==(const InstructionPair&) const = default;
};

/// Three distinct pairs drawn uniformly from a pool of six (partial Fisher-Yates
/// over mt19937_64). Throws Error unless the pool has exactly six entries.
std::array<IncontextExample, 3> sample_incontext(std::span<const IncontextExample> pool,
                                                 std::uint64_t seed);

/// One instruction per non-empty line; leading "1.", "2)", "-", "*" and
/// "Instruction:" markers are stripped.
std::vector<std::string> parse_instruction_lines(std::string_view text);

/// Lowercased substrings an instruction must not contain (compared case-insensitively):
/// the api_name, the dotted callee and string literals of at least four characters
/// from api_call.
std::vector<std::string> leak_tokens(const ApiRecord& record);
bool leaks_api(std::string_view instruction, const std::vector<std::string>& tokens);

struct InstructionBatch {
    std::string reference_id;
    std::vector<InstructionPair> pairs;
    /// Empty when the backend produced all requested instructions.
    std::string failure;

    bool complete() const { return failure.empty(); }
};

/// Builds the self-instruct prompt from three pool samples and the record, calls
/// the backend (request example_id = record id), and keeps the first `n` parsed
/// lines. Leaking pairs are regenerated once from a second call keyed
/// "<id>#retry"; a pair that still leaks is kept with the flag. A backend error
/// is retried once, then reported through `failure` alongside whatever was parsed.
InstructionBatch generate_instructions(const ApiRecord& record,
                                       std::span<const IncontextExample> pool,
                                       const CompletionBackend& backend, std::uint64_t seed,
                                       std::size_t n = 10);

/// Runs generate_instructions for every record with up to `parallelism` concurrent
/// backend calls. The per-record seed is `seed ^ fnv1a64(record.id)`. Batches come
/// back in database order.
std::vector<InstructionBatch> generate_dataset(const ApiDatabase& db,
                                               std::span<const IncontextExample> pool,
                                               const CompletionBackend& backend,
                                               std::uint64_t seed, std::size_t n = 10,
                                               std::size_t parallelism = 4);

/// {instruction, api_call, hub} lines; returns the pairs for `hub` in file order.
std::vector<IncontextExample> load_seed_pool(const std::filesystem::path& path, Hub hub);

/// JSON Lines of {instruction, reference_id, source, flags}; source is
/// "handwritten" or "generated:<label>".
std::string pairs_to_jsonl(const std::vector<InstructionPair>& pairs,
                           const ordered_json& header = {});
std::vector<InstructionPair> parse_pairs(std::string_view jsonl);

}  // namespace hubeval
