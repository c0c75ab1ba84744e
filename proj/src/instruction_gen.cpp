#include "hubeval/instruction_gen.hpp"

#include "hubeval/call_parser.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <regex>
#include <sstream>
#include <thread>

namespace hubeval {

namespace {

void collect_literals(const Value& v, std::vector<std::string>& out) {
    if (const auto* s = std::get_if<StringLit>(&v.node)) {
        if (trim(s->text).size() >= 4) out.push_back(to_lower(trim(s->text)));
    } else if (const auto* l = std::get_if<ListLit>(&v.node)) {
        for (const auto& item : l->items) collect_literals(item, out);
    } else if (const auto* c = std::get_if<Box<CallNode>>(&v.node)) {
        for (const auto& p : (*c)->positional) collect_literals(p, out);
        for (const auto& k : (*c)->keyword) collect_literals(k.value, out);
    }
}

std::string call_backend(const CompletionBackend& backend, const std::string& prompt,
                         const std::string& key, std::string& failure) {
    CompletionRequest req;
    req.prompt = prompt;
    req.example_id = key;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            failure.clear();
            return backend.complete(req);
        } catch (const std::exception& e) {
            failure = e.what();
        }
    }
    return {};
}

}  // namespace

bool InstructionPair::has_flag(std::string_view flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::array<IncontextExample, 3> sample_incontext(std::span<const IncontextExample> pool,
                                                 std::uint64_t seed) {
    if (pool.size() != 6) {
        throw Error("in-context pool must hold exactly 6 pairs, got " + std::to_string(pool.size()));
    }
    std::array<std::size_t, 6> idx{};
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::array<IncontextExample, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_below(rng, 6 - i));
        std::swap(idx[i], idx[j]);
        out[i] = pool[idx[i]];
    }
    return out;
}

std::vector<std::string> parse_instruction_lines(std::string_view text) {
    static const std::regex marker(
        R"(^\s*(?:(?:instruction\s*\d*\s*[:.)-]\s*)|(?:\d+\s*[.):-]\s*)|(?:[-*]\s+))+)",
        std::regex::icase);
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::string stripped = trim(std::regex_replace(line, marker, "", std::regex_constants::format_first_only));
        if (!stripped.empty()) out.push_back(std::move(stripped));
    }
    return out;
}

std::vector<std::string> leak_tokens(const ApiRecord& record) {
    std::vector<std::string> tokens;
    if (!trim(record.api_name).empty()) tokens.push_back(to_lower(trim(record.api_name)));
    for (const auto& call : parse_calls(record.api_call)) {
        tokens.push_back(to_lower(call.callee_path()));
        for (const auto& p : call.positional) collect_literals(p, tokens);
        for (const auto& k : call.keyword) collect_literals(k.value, tokens);
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

bool leaks_api(std::string_view instruction, const std::vector<std::string>& tokens) {
    return std::any_of(tokens.begin(), tokens.end(),
                       [&](const std::string& t) { return icontains(instruction, t); });
}

InstructionBatch generate_instructions(const ApiRecord& record,
                                       std::span<const IncontextExample> pool,
                                       const CompletionBackend& backend, std::uint64_t seed,
                                       std::size_t n) {
    if (n == 0) throw Error("instruction count must be at least 1");
    const auto incontext = sample_incontext(pool, seed);
    const std::string prompt = build_selfinstruct_prompt(record, incontext, n);
    const auto tokens = leak_tokens(record);
    const std::string label = backend.provenance().label;

    InstructionBatch batch;
    batch.reference_id = record.id;
    const std::string text = call_backend(backend, prompt, record.id, batch.failure);
    auto lines = parse_instruction_lines(text);
    if (lines.size() > n) lines.resize(n);
    for (auto& l : lines) {
        InstructionPair p{std::move(l), record.id, InstructionPair::Source::Generated, label, {}};
        if (leaks_api(p.instruction, tokens)) p.flags.emplace_back("api_name_leak");
        batch.pairs.push_back(std::move(p));
    }

    const bool any_leak = std::any_of(batch.pairs.begin(), batch.pairs.end(),
                                      [](const auto& p) { return p.has_flag("api_name_leak"); });
    if (any_leak) {
        std::string retry_failure;
        const auto retry = parse_instruction_lines(
            call_backend(backend, prompt, record.id + "#retry", retry_failure));
        std::size_t next = 0;
        for (auto& p : batch.pairs) {
            if (!p.has_flag("api_name_leak")) continue;
            while (next < retry.size() && leaks_api(retry[next], tokens)) ++next;
            if (next < retry.size()) {
                p.instruction = retry[next++];
                p.flags = {"regenerated"};
            } else {
                p.flags.emplace_back("regenerated");
            }
        }
    }

    if (batch.failure.empty() && batch.pairs.size() < n) {
        batch.failure = "backend returned " + std::to_string(batch.pairs.size()) + " of " +
                        std::to_string(n) + " instructions";
    }
    return batch;
}

std::vector<InstructionBatch> generate_dataset(const ApiDatabase& db,
                                               std::span<const IncontextExample> pool,
                                               const CompletionBackend& backend,
                                               std::uint64_t seed, std::size_t n,
                                               std::size_t parallelism) {
    if (pool.size() != 6) {
        throw Error("in-context pool must hold exactly 6 pairs, got " + std::to_string(pool.size()));
    }
    std::vector<InstructionBatch> out(db.size());
    auto run_one = [&](std::size_t i) {
        const auto& r = db.records()[i];
        try {
            out[i] = generate_instructions(r, pool, backend, seed ^ fnv1a64(r.id), n);
        } catch (const std::exception& e) {
            out[i] = InstructionBatch{r.id, {}, e.what()};
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(parallelism, db.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < db.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < db.size(); i = next++) run_one(i);
            });
        }
    }
    return out;
}

std::vector<IncontextExample> load_seed_pool(const std::filesystem::path& path, Hub hub) {
    std::vector<IncontextExample> out;
    std::istringstream in{read_file(path)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("_header")) continue;
            if (parse_hub(j.at("hub").get<std::string>()) != hub) continue;
            out.push_back({j.at("instruction").get<std::string>(), j.at("api_call").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string pairs_to_jsonl(const std::vector<InstructionPair>& pairs, const ordered_json& header) {
    std::string out;
    if (header.is_object()) out += ordered_json{{"_header", header}}.dump() + "\n";
    for (const auto& p : pairs) {
        ordered_json j = ordered_json::object();
        j["instruction"] = p.instruction;
        j["reference_id"] = p.reference_id;
        j["source"] = p.source == InstructionPair::Source::Handwritten ? std::string("handwritten")
                                                                      : "generated:" + p.label;
        j["flags"] = p.flags;
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<InstructionPair> parse_pairs(std::string_view jsonl) {
    std::vector<InstructionPair> out;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("_header")) continue;
            InstructionPair p;
            p.instruction = j.at("instruction").get<std::string>();
            p.reference_id = j.at("reference_id").get<std::string>();
            const auto source = j.at("source").get<std::string>();
            if (source == "handwritten") {
                p.source = InstructionPair::Source::Handwritten;
            } else if (source.rfind("generated:", 0) == 0) {
                p.label = source.substr(10);
            } else {
                throw Error("unknown source '" + source + "'");
            }
            p.flags = j.value("flags", std::vector<std::string>{});
            out.push_back(std::move(p));
        } catch (const nlohmann::json::exception& e) {
            throw Error("pairs line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("pairs line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace hubeval
