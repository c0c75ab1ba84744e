#include "hubeval/retriever.hpp"

#include "http_client.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace hubeval {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string document_text(const ApiRecord& r) {
    std::string args;
    for (const auto& a : r.api_arguments) args += (args.empty() ? "" : " ") + a.name;
    std::ostringstream perf;
    bool first = true;
    for (const auto& g : r.performance) {
        perf << (first ? "" : " ") << g.dataset;
        first = false;
        for (const auto& m : g.metrics) perf << ' ' << m.name << ' ' << m.value;
    }
    const std::string parts[] = {r.domain,       r.framework,    r.functionality,
                                 r.api_name,     r.api_call,     args,
                                 r.environment_requirements,     r.example_code,
                                 perf.str(),     r.description};
    std::string out;
    for (std::size_t i = 0; i < std::size(parts); ++i) {
        if (i) out.push_back(' ');
        out += parts[i];
    }
    return out;
}

RetrievalResult rank_top_k(std::span<const std::string> ids, std::span<const double> scores,
                           std::size_t k) {
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return ids[a] < ids[b];
                      });
    RetrievalResult out;
    out.k = k;
    out.ranked.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.ranked.push_back({ids[order[i]], scores[order[i]]});
    return out;
}

// --- BM25 -----------------------------------------------------------------

void Bm25Index::add_document(std::string id, std::string_view text) {
    const auto doc = static_cast<std::uint32_t>(ids_.size());
    const auto tokens = tokenize(text);
    std::map<std::string, std::uint32_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (auto& [term, count] : tf) postings_[term].push_back(Posting{doc, count});
    ids_.push_back(std::move(id));
    lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total_length_ += tokens.size();
}

double Bm25Index::avg_doc_length() const {
    return ids_.empty() ? 0.0
                        : static_cast<double>(total_length_) / static_cast<double>(ids_.size());
}

std::span<const Posting> Bm25Index::postings(const std::string& term) const {
    const auto it = postings_.find(term);
    if (it == postings_.end()) return {};
    return it->second;
}

double Bm25Index::idf(const std::string& term) const {
    const auto n = static_cast<double>(doc_count());
    const auto df = static_cast<double>(postings(term).size());
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

std::vector<double> Bm25Index::score_all(std::span<const std::string> query_terms) const {
    std::vector<double> scores(doc_count(), 0.0);
    const double avg = avg_doc_length();
    const double k1 = params_.k1;
    const double b = params_.b;
    for (const auto& term : query_terms) {
        const auto plist = postings(term);
        if (plist.empty()) continue;
        const double w = idf(term);
        for (const auto& p : plist) {
            const double tf = p.tf;
            const double norm = avg > 0.0 ? lengths_[p.doc] / avg : 1.0;
            scores[p.doc] += w * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * norm));
        }
    }
    return scores;
}

ordered_json Bm25Index::to_json() const {
    ordered_json j = ordered_json::object();
    j["k1"] = params_.k1;
    j["b"] = params_.b;
    j["doc_ids"] = ids_;
    j["doc_lengths"] = lengths_;
    ordered_json postings = ordered_json::object();
    for (const auto& [term, plist] : postings_) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : plist) arr.push_back({p.doc, p.tf});
        postings[term] = std::move(arr);
    }
    j["postings"] = std::move(postings);
    return j;
}

Bm25Index Bm25Index::from_json(const ordered_json& j) {
    try {
        Bm25Index index(Bm25Params{j.at("k1").get<double>(), j.at("b").get<double>()});
        index.ids_ = j.at("doc_ids").get<std::vector<std::string>>();
        index.lengths_ = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
        if (index.ids_.size() != index.lengths_.size()) {
            throw Error("bm25 index: doc_ids and doc_lengths differ in size");
        }
        for (auto len : index.lengths_) index.total_length_ += len;
        for (const auto& [term, arr] : j.at("postings").items()) {
            auto& plist = index.postings_[term];
            for (const auto& p : arr) {
                const Posting post{p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()};
                if (post.doc >= index.ids_.size()) {
                    throw Error("bm25 index: posting for '" + term + "' names unknown document");
                }
                plist.push_back(post);
            }
        }
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bm25 index: ") + e.what());
    }
}

Bm25Index build_bm25(const ApiDatabase& db, Bm25Params params) {
    if (db.empty()) throw Error("cannot build a BM25 index over an empty database");
    Bm25Index index(params);
    for (const auto& r : db.records()) index.add_document(r.id, document_text(r));
    return index;
}

RetrievalResult bm25_retrieve(const Bm25Index& index, std::string_view query, std::size_t k) {
    if (k == 0) throw Error("k must be at least 1");
    const auto terms = tokenize(query);
    if (terms.empty()) return RetrievalResult{{}, k};
    const auto scores = index.score_all(terms);
    return rank_top_k(index.doc_ids(), scores, k);
}

std::vector<RetrievalResult> bm25_retrieve_batch_serial(const Bm25Index& index,
                                                        std::span<const std::string> queries,
                                                        std::size_t k) {
    std::vector<RetrievalResult> out;
    out.reserve(queries.size());
    for (const auto& q : queries) out.push_back(bm25_retrieve(index, q, k));
    return out;
}

std::vector<RetrievalResult> bm25_retrieve_batch(const Bm25Index& index,
                                                 std::span<const std::string> queries,
                                                 std::size_t k) {
    if (k == 0) throw Error("k must be at least 1");
    std::vector<RetrievalResult> out(queries.size());
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            bm25_retrieve(index, queries[static_cast<std::size_t>(i)], k);
    }
    return out;
}

// --- Embeddings ---------------------------------------------------------

std::vector<std::vector<double>> EmbeddingProvider::embed_batch(
    std::span<const std::string> texts) const {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

HashedBagOfWords::HashedBagOfWords(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw Error("embedding dimension must be at least 1");
}

std::vector<double> HashedBagOfWords::embed(std::string_view text) const {
    std::vector<double> v(dimension_, 0.0);
    for (const auto& t : tokenize(text)) v[fnv1a64(t) % dimension_] += 1.0;
    return v;
}

RemoteEmbeddingConfig RemoteEmbeddingConfig::from_json(const ordered_json& j) {
    RemoteEmbeddingConfig c;
    try {
        c.base_url = j.at("base_url").get<std::string>();
        c.model = j.at("model").get<std::string>();
        c.dimension = j.at("dimension").get<std::size_t>();
        c.path = j.value("path", c.path);
        c.api_key_env = j.value("api_key_env", c.api_key_env);
        c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
        c.max_retries = j.value("max_retries", c.max_retries);
        c.batch_size = j.value("batch_size", c.batch_size);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("embedding config: ") + e.what());
    }
    return c;
}

RemoteEmbeddingClient::RemoteEmbeddingClient(RemoteEmbeddingConfig config)
    : config_(std::move(config)) {
    if (config_.dimension == 0) throw Error("embedding config: dimension must be at least 1");
    if (config_.batch_size == 0) config_.batch_size = 1;
}

std::vector<double> RemoteEmbeddingClient::embed(std::string_view text) const {
    const std::string owned(text);
    return embed_batch(std::span<const std::string>(&owned, 1)).front();
}

std::vector<std::vector<double>> RemoteEmbeddingClient::embed_batch(
    std::span<const std::string> texts) const {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += config_.batch_size) {
        const auto chunk = texts.subspan(start, std::min(config_.batch_size, texts.size() - start));
        ordered_json body = ordered_json::object();
        body["model"] = config_.model;
        body["input"] = std::vector<std::string>(chunk.begin(), chunk.end());

        detail::HttpResponse res;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            res = detail::post_json(config_.base_url, config_.path, body.dump(),
                                    config_.api_key_env, config_.timeout_seconds);
            if (res.status == 200 || !detail::is_retriable_status(res.status)) break;
            if (attempt < config_.max_retries) {
                std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
            }
        }
        if (res.status != 200) {
            throw Error("embedding request failed (status " + std::to_string(res.status) + "): " +
                        (res.transport_error.empty() ? res.body : res.transport_error));
        }
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(res.body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("embedding response is not JSON: ") + e.what());
        }
        const nlohmann::json* rows = &parsed;
        if (parsed.is_object() && parsed.contains("data")) rows = &parsed["data"];
        if (!rows->is_array() || rows->size() != chunk.size()) {
            throw Error("embedding response: expected " + std::to_string(chunk.size()) +
                        " vectors");
        }
        for (const auto& row : *rows) {
            const auto& vec = row.is_object() ? row.at("embedding") : row;
            auto v = vec.get<std::vector<double>>();
            if (v.size() != config_.dimension) {
                throw Error("embedding response: vector of length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(config_.dimension));
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::min(a.size(), b.size());
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingIndex build_embedding_index(const ApiDatabase& db, const EmbeddingProvider& provider) {
    if (provider.dimension() == 0) throw Error("embedding dimension must be at least 1");
    EmbeddingIndex index;
    index.ids.reserve(db.size());
    index.vectors.reserve(db.size());
    for (const auto& r : db.records()) {
        try {
            index.vectors.push_back(provider.embed(document_text(r)));
        } catch (const std::exception& e) {
            throw Error("embedding document '" + r.id + "' failed: " + e.what());
        }
        index.ids.push_back(r.id);
    }
    return index;
}

RetrievalResult embed_retrieve(const EmbeddingIndex& index, const EmbeddingProvider& provider,
                               std::string_view query, std::size_t k) {
    if (k == 0) throw Error("k must be at least 1");
    const auto q = provider.embed(query);
    std::vector<double> scores(index.ids.size());
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = cosine_similarity(q, index.vectors[i]);
    return rank_top_k(index.ids, scores, k);
}

RetrievalResult embed_retrieve(const ApiDatabase& db, const EmbeddingProvider& provider,
                               std::string_view query, std::size_t k) {
    return embed_retrieve(build_embedding_index(db, provider), provider, query, k);
}

RetrievalResult oracle_retrieve(const EvalExample& example, const ApiDatabase& db) {
    if (!db.contains(example.reference_id)) {
        throw Error("example '" + example.id + "': reference id '" + example.reference_id +
                    "' is not in the database");
    }
    return RetrievalResult{{ScoredDoc{example.reference_id, 1.0}}, 1};
}

RetrievalResult Bm25Retriever::retrieve(const EvalExample& example, std::size_t k) const {
    return bm25_retrieve(index_, example.instruction, k);
}

EmbeddingRetriever::EmbeddingRetriever(const ApiDatabase& db, const EmbeddingProvider& provider)
    : provider_(provider), index_(build_embedding_index(db, provider)) {}

RetrievalResult EmbeddingRetriever::retrieve(const EvalExample& example, std::size_t k) const {
    return embed_retrieve(index_, provider_, example.instruction, k);
}

RetrievalResult OracleRetriever::retrieve(const EvalExample& example, std::size_t /*k*/) const {
    return oracle_retrieve(example, db_);
}

}  // namespace hubeval
