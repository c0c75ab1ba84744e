#include "hubeval/model_client.hpp"

#include "hubeval/prompt_builder.hpp"
#include "http_client.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace hubeval {

namespace {

std::string_view kind_name(Provenance::Kind kind) {
    switch (kind) {
    case Provenance::Kind::Remote: return "remote";
    case Provenance::Kind::Replay: return "replay";
    case Provenance::Kind::Mock: return "mock";
    }
    return "mock";
}

Provenance::Kind parse_kind(std::string_view s) {
    if (s == "remote") return Provenance::Kind::Remote;
    if (s == "replay") return Provenance::Kind::Replay;
    if (s == "mock") return Provenance::Kind::Mock;
    throw Error("unknown provenance kind '" + std::string(s) + "'");
}

}  // namespace

void CompletionRequest::validate() const {
    if (max_tokens < 1) throw Error("max_tokens must be at least 1");
    if (!(temperature >= 0.0)) throw Error("temperature must be non-negative");
}

std::string EchoBackend::complete(const CompletionRequest& request) const {
    request.validate();
    return request.prompt;
}

std::string CopyDocBackend::complete(const CompletionRequest& request) const {
    request.validate();
    const auto doc = extract_retrieved_document(request.prompt);
    return doc ? doc->api_call : std::string{};
}

const Candidate* CandidateSet::find(std::string_view example_id) const {
    const auto it = by_id.find(std::string(example_id));
    return it == by_id.end() ? nullptr : &it->second;
}

std::string candidates_to_jsonl(const CandidateSet& set, const ordered_json& header) {
    ordered_json h = ordered_json::object();
    if (header.is_object()) {
        for (const auto& [k, v] : header.items()) h[k] = v;
    }
    h["provenance"] = {{"kind", std::string(kind_name(set.provenance.kind))},
                       {"label", set.provenance.label}};
    std::string out = ordered_json{{"_header", h}}.dump() + "\n";
    for (const auto& [id, c] : set.by_id) {
        ordered_json j = ordered_json::object();
        j["example_id"] = id;
        j["text"] = c.text;
        j["ok"] = c.ok;
        if (!c.ok || !c.error.empty()) j["error"] = c.error;
        out += j.dump() + "\n";
    }
    return out;
}

CandidateSet parse_candidates(std::string_view jsonl) {
    CandidateSet set;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.contains("_header")) {
                const auto& h = j["_header"];
                if (h.contains("provenance")) {
                    set.provenance.kind = parse_kind(h["provenance"].at("kind").get<std::string>());
                    set.provenance.label = h["provenance"].at("label").get<std::string>();
                }
                continue;
            }
            Candidate c;
            c.text = j.at("text").get<std::string>();
            c.ok = j.value("ok", true);
            c.error = j.value("error", std::string{});
            const auto id = j.at("example_id").get<std::string>();
            if (!set.by_id.emplace(id, std::move(c)).second) {
                throw Error("duplicate example_id '" + id + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error("candidates line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("candidates line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return set;
}

CandidateSet load_candidates(const std::filesystem::path& path) {
    auto set = parse_candidates(read_file(path));
    if (set.provenance.label.empty()) set.provenance = {Provenance::Kind::Replay, path.string()};
    return set;
}

ReplayBackend::ReplayBackend(const std::filesystem::path& path)
    : set_(parse_candidates(read_file(path))),
      label_(set_.provenance.label.empty() ? path.string() : set_.provenance.label) {}

ReplayBackend::ReplayBackend(CandidateSet set, std::string label)
    : set_(std::move(set)), label_(std::move(label)) {}

std::string ReplayBackend::complete(const CompletionRequest& request) const {
    request.validate();
    const Candidate* c = set_.find(request.example_id);
    if (c == nullptr) {
        throw Error("replay '" + label_ + "' has no entry for example '" + request.example_id + "'");
    }
    if (!c->ok) throw BackendError("replayed failure: " + c->error, 0, false);
    return c->text;
}

RemoteModelConfig RemoteModelConfig::from_json(const ordered_json& j) {
    RemoteModelConfig c;
    try {
        c.base_url = j.at("base_url").get<std::string>();
        c.model = j.at("model").get<std::string>();
        c.path = j.value("path", c.path);
        c.style = j.value("style", c.style);
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
        c.max_retries = j.value("max_retries", c.max_retries);
        c.max_tokens = j.value("max_tokens", c.max_tokens);
        c.temperature = j.value("temperature", c.temperature);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("remote model config: ") + e.what());
    }
    if (c.style != "completions" && c.style != "chat") {
        throw Error("remote model config: style must be 'completions' or 'chat'");
    }
    if (c.max_retries < 0) throw Error("remote model config: max_retries must be >= 0");
    return c;
}

RemoteModelConfig RemoteModelConfig::load(const std::filesystem::path& path) {
    try {
        return from_json(ordered_json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

RemoteBackend::RemoteBackend(RemoteModelConfig config) : config_(std::move(config)) {}

std::string RemoteBackend::complete(const CompletionRequest& request) const {
    request.validate();
    ordered_json body = ordered_json::object();
    body["model"] = request.model_name.empty() ? config_.model : request.model_name;
    if (config_.style == "chat") {
        body["messages"] = ordered_json::array({{{"role", "user"}, {"content", request.prompt}}});
    } else {
        body["prompt"] = request.prompt;
    }
    body["max_tokens"] = request.max_tokens;
    body["temperature"] = request.temperature;
    const std::string payload = body.dump();

    detail::HttpResponse res;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        res = detail::post_json(config_.base_url, config_.path, payload, config_.api_key_env,
                                config_.timeout_seconds);
        if (res.status == 200 || !detail::is_retriable_status(res.status)) break;
        if (attempt < config_.max_retries) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
        }
    }
    if (res.status != 200) {
        const std::string detail_text = res.transport_error.empty() ? res.body : res.transport_error;
        throw BackendError("completion request failed (status " + std::to_string(res.status) +
                               "): " + detail_text,
                           res.status, detail::is_retriable_status(res.status) ||
                                           res.status == 401 || res.status == 403);
    }
    try {
        const auto j = nlohmann::json::parse(res.body);
        const auto& choice = j.at("choices").at(0);
        if (choice.contains("text")) return choice["text"].get<std::string>();
        return choice.at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("malformed completion response: ") + e.what(), res.status,
                           false);
    }
}

CandidateSet generate_candidates(const std::vector<EvalExample>& examples, const Retriever* retriever,
                                 const ApiDatabase& db, const CompletionBackend& backend,
                                 const GenerateOptions& options) {
    std::vector<Candidate> results(examples.size());

    auto run_one = [&](std::size_t i) {
        const EvalExample& ex = examples[i];
        try {
            PromptMode mode = ZeroShot{};
            if (retriever != nullptr) {
                const auto hits = retriever->retrieve(ex, 1);
                if (const ScoredDoc* top = hits.top()) mode = WithRetrieval{db.at(top->id)};
            }
            CompletionRequest req;
            req.prompt = build_prompt(ex.instruction, mode);
            req.model_name = options.model_name;
            req.max_tokens = options.max_tokens;
            req.temperature = options.temperature;
            req.example_id = ex.id;
            results[i] = Candidate{backend.complete(req), true, {}};
        } catch (const std::exception& e) {
            results[i] = Candidate{{}, false, e.what()};
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.parallelism, examples.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < examples.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < examples.size(); i = next++) run_one(i);
            });
        }
    }

    CandidateSet set;
    set.provenance = backend.provenance();
    for (std::size_t i = 0; i < examples.size(); ++i) {
        set.by_id.insert_or_assign(examples[i].id, std::move(results[i]));
    }
    return set;
}

}  // namespace hubeval
