#pragma once

#include "hubeval/api_registry.hpp"
#include "hubeval/eval_example.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hubeval {

/// Lowercased maximal runs of ASCII alphanumerics.
std::vector<std::string> tokenize(std::string_view text);

/// The ten documentation fields joined by single spaces; this is what gets indexed.
std::string document_text(const ApiRecord& record);

struct ScoredDoc {
    std::string id;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// Ranked best-first; scores non-increasing, ties by ascending id; size <= k.
struct RetrievalResult {
    std::vector<ScoredDoc> ranked;
    std::size_t k = 0;

    const ScoredDoc* top() const { return ranked.empty() ? nullptr : &ranked.front(); }
};

/// Orders (id, score) pairs by descending score then ascending id and keeps k.
RetrievalResult rank_top_k(std::span<const std::string> ids, std::span<const double> scores,
                           std::size_t k);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

/// Okapi BM25 inverted index. Each document is one API record.
class Bm25Index {
public:
    explicit Bm25Index(Bm25Params params = {}) : params_(params) {}

    void add_document(std::string id, std::string_view text);

    std::size_t doc_count() const { return ids_.size(); }
    double avg_doc_length() const;
    const Bm25Params& params() const { return params_; }
    const std::string& doc_id(std::size_t doc) const { return ids_[doc]; }
    std::span<const std::string> doc_ids() const { return ids_; }
    std::uint32_t doc_length(std::size_t doc) const { return lengths_[doc]; }
    std::span<const Posting> postings(const std::string& term) const;
    const std::map<std::string, std::vector<Posting>>& all_postings() const { return postings_; }

    /// log((N - df + 0.5) / (df + 0.5) + 1); never negative.
    double idf(const std::string& term) const;

    /// Score of every document for the tokenized query. Repeated query terms count
    /// once per occurrence.
    std::vector<double> score_all(std::span<const std::string> query_terms) const;

    ordered_json to_json() const;
    static Bm25Index from_json(const ordered_json& j);

private:
    Bm25Params params_;
    std::vector<std::string> ids_;
    std::vector<std::uint32_t> lengths_;
    std::uint64_t total_length_ = 0;
    std::map<std::string, std::vector<Posting>> postings_;
};

/// Throws Error on an empty database.
Bm25Index build_bm25(const ApiDatabase& db, Bm25Params params = {});

/// Top-k documents for `query`; empty when the query has no tokens. Throws if k == 0.
RetrievalResult bm25_retrieve(const Bm25Index& index, std::string_view query, std::size_t k);

/// Many queries at once. The parallel kernel splits queries across OpenMP threads;
/// the serial version is the reference it must agree with.
std::vector<RetrievalResult> bm25_retrieve_batch(const Bm25Index& index,
                                                 std::span<const std::string> queries,
                                                 std::size_t k);
std::vector<RetrievalResult> bm25_retrieve_batch_serial(const Bm25Index& index,
                                                        std::span<const std::string> queries,
                                                        std::size_t k);

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
    virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const;
};

/// Deterministic offline provider: token counts hashed (FNV-1a) into `dimension` buckets.
class HashedBagOfWords final : public EmbeddingProvider {
public:
    explicit HashedBagOfWords(std::size_t dimension = 256);
    std::size_t dimension() const override { return dimension_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    std::size_t dimension_;
};

struct RemoteEmbeddingConfig {
    std::string base_url;                ///< e.g. https://api.example.com
    std::string path = "/v1/embeddings";
    std::string model;
    std::string api_key_env;             ///< environment variable holding the bearer token
    std::size_t dimension = 0;
    int timeout_seconds = 30;
    int max_retries = 2;
    std::size_t batch_size = 64;

    static RemoteEmbeddingConfig from_json(const ordered_json& j);
};

/// POSTs {"model", "input": [texts]} and reads either {"data": [{"embedding": [...]}]}
/// or a bare array of vectors. Each call opens its own connection, so one client
/// can serve concurrent callers.
class RemoteEmbeddingClient final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingClient(RemoteEmbeddingConfig config);
    std::size_t dimension() const override { return config_.dimension; }
    std::vector<double> embed(std::string_view text) const override;
    std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;

private:
    RemoteEmbeddingConfig config_;
};

/// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Precomputed document vectors.
struct EmbeddingIndex {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vectors;
};

/// Provider failures are rethrown as Error naming the failing document id.
EmbeddingIndex build_embedding_index(const ApiDatabase& db, const EmbeddingProvider& provider);
RetrievalResult embed_retrieve(const EmbeddingIndex& index, const EmbeddingProvider& provider,
                               std::string_view query, std::size_t k);
RetrievalResult embed_retrieve(const ApiDatabase& db, const EmbeddingProvider& provider,
                               std::string_view query, std::size_t k);

/// The example's own reference record with score 1. Throws if it is not in `db`.
RetrievalResult oracle_retrieve(const EvalExample& example, const ApiDatabase& db);

/// A retrieval setting usable for prompt construction.
class Retriever {
public:
    virtual ~Retriever() = default;
    virtual std::string_view name() const = 0;
    virtual RetrievalResult retrieve(const EvalExample& example, std::size_t k) const = 0;
};

class Bm25Retriever final : public Retriever {
public:
    explicit Bm25Retriever(const Bm25Index& index) : index_(index) {}
    std::string_view name() const override { return "bm25"; }
    RetrievalResult retrieve(const EvalExample& example, std::size_t k) const override;

private:
    const Bm25Index& index_;
};

class EmbeddingRetriever final : public Retriever {
public:
    EmbeddingRetriever(const ApiDatabase& db, const EmbeddingProvider& provider);
    std::string_view name() const override { return "embedding"; }
    RetrievalResult retrieve(const EvalExample& example, std::size_t k) const override;

private:
    const EmbeddingProvider& provider_;
    EmbeddingIndex index_;
};

class OracleRetriever final : public Retriever {
public:
    explicit OracleRetriever(const ApiDatabase& db) : db_(db) {}
    std::string_view name() const override { return "oracle"; }
    RetrievalResult retrieve(const EvalExample& example, std::size_t k) const override;

private:
    const ApiDatabase& db_;
};

}  // namespace hubeval
