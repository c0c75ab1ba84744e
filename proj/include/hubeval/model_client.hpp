#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/eval_example.hpp"
#include "hubeval/retriever.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace hubeval {

struct CompletionRequest {
    std::string prompt;
    std::string model_name;
    int max_tokens = 512;
    double temperature = 0.0;
    /// Key for replay lookups; ignored by remote backends.
    std::string example_id;

    /// Throws Error unless max_tokens >= 1 and temperature >= 0.
    void validate() const;
};

/// A failed completion. `status` is the HTTP status (0 for transport errors).
class BackendError : public Error {
public:
    BackendError(const std::string& what, int status, bool retriable)
        : Error(what), status_(status), retriable_(retriable) {}
    int status() const { return status_; }
    bool retriable() const { return retriable_; }

private:
    int status_;
    bool retriable_;
};

struct Provenance {
    enum class Kind { Remote, Replay, Mock };
    Kind kind = Kind::Mock;
    /// Model name for Remote, file path for Replay, backend name for Mock.
    std::string label;

    bool operator==(const Provenance&) const = default;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual std::string complete(const CompletionRequest& request) const = 0;
    virtual Provenance provenance() const = 0;
};

/// Returns the prompt itself.
class EchoBackend final : public CompletionBackend {
public:
    std::string complete(const CompletionRequest& request) const override;
    Provenance provenance() const override { return {Provenance::Kind::Mock, "echo"}; }
};

/// Answers with the api_call of the document embedded in a retrieval prompt, or an
/// empty string when the prompt carries none.
class CopyDocBackend final : public CompletionBackend {
public:
    std::string complete(const CompletionRequest& request) const override;
    Provenance provenance() const override { return {Provenance::Kind::Mock, "copy-doc"}; }
};

struct Candidate {
    std::string text;
    bool ok = true;
    std::string error;

    bool operator==(const Candidate&) const = default;
};

struct CandidateSet {
    std::map<std::string, Candidate> by_id;
    Provenance provenance;

    const Candidate* find(std::string_view example_id) const;
    bool operator==(const CandidateSet&) const = default;
};

/// JSON Lines: a `{"_header": {...}}` line carrying provenance (plus `header`
/// fields), then {example_id, text, ok, error?} per example in id order.
std::string candidates_to_jsonl(const CandidateSet& set, const ordered_json& header = {});
CandidateSet parse_candidates(std::string_view jsonl);
CandidateSet load_candidates(const std::filesystem::path& path);

/// Serves stored texts by example id. Entries stored with ok=false replay as
/// BackendError.
class ReplayBackend final : public CompletionBackend {
public:
    explicit ReplayBackend(const std::filesystem::path& path);
    ReplayBackend(CandidateSet set, std::string label);
    std::string complete(const CompletionRequest& request) const override;
    Provenance provenance() const override { return {Provenance::Kind::Replay, label_}; }

private:
    CandidateSet set_;
    std::string label_;
};

struct RemoteModelConfig {
    std::string base_url;
    std::string path = "/v1/completions";
    /// "completions" sends {prompt}; "chat" sends {messages: [{role: user, content}]}.
    std::string style = "completions";
    std::string model;
    std::string api_key_env;
    int timeout_seconds = 60;
    int max_retries = 2;
    int max_tokens = 512;
    double temperature = 0.0;

    static RemoteModelConfig from_json(const ordered_json& j);
    static RemoteModelConfig load(const std::filesystem::path& path);
};

/// One HTTP request per completion (plus retries on 0/408/429/5xx).
class RemoteBackend final : public CompletionBackend {
public:
    explicit RemoteBackend(RemoteModelConfig config);
    std::string complete(const CompletionRequest& request) const override;
    Provenance provenance() const override { return {Provenance::Kind::Remote, config_.model}; }
    const RemoteModelConfig& config() const { return config_; }

private:
    RemoteModelConfig config_;
};

struct GenerateOptions {
    std::string model_name;
    int max_tokens = 512;
    double temperature = 0.0;
    std::size_t parallelism = 4;
};

/// Builds each example's prompt (retrieving the top-1 document first when
/// `retriever` is set), calls the backend, and keys outputs by example id.
/// Failures are recorded per example; the batch always completes.
CandidateSet generate_candidates(const std::vector<EvalExample>& examples, const Retriever* retriever,
                                 const ApiDatabase& db, const CompletionBackend& backend,
                                 const GenerateOptions& options = {});

}  // namespace hubeval
