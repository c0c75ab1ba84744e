#include "hubeval/retriever.hpp"

#include "oracles/bm25_oracle.hpp"
#include "support/support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hubeval;
using testing_support::fixture_db;

namespace {

Bm25Index index_of(const std::vector<std::string>& docs) {
    Bm25Index idx;
    for (std::size_t i = 0; i < docs.size(); ++i) idx.add_document("d" + std::to_string(i), docs[i]);
    return idx;
}

bool close_rel(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_SUITE("retriever") {

TEST_CASE("tokenize lowercases alphanumeric runs") {
    CHECK(tokenize("torch.hub.load('Pytorch/Vision', 'densenet121')") ==
          std::vector<std::string>{"torch", "hub", "load", "pytorch", "vision", "densenet121"});
    CHECK(tokenize("  ").empty());
    CHECK(tokenize("a_b-c") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("three documents by hand") {
    // lengths 3, 2, 4; avgdl 3; "a" appears in two documents
    const auto idx = index_of({"a b c", "a a", "b d e f"});
    CHECK(idx.doc_count() == 3);
    CHECK(idx.avg_doc_length() == doctest::Approx(3.0));
    CHECK(idx.idf("a") == doctest::Approx(std::log(1.6)));
    CHECK(idx.idf("zzz") == doctest::Approx(std::log(8.0)));
    const std::vector<std::string> q{"a"};
    const auto s = idx.score_all(q);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(std::log(1.6) * 1.0));
    CHECK(s[1] == doctest::Approx(std::log(1.6) * 4.4 / 2.9));
    CHECK(s[2] == 0.0);
    const auto r = bm25_retrieve(idx, "A", 3);
    REQUIRE(r.ranked.size() == 3);
    CHECK(r.ranked[0].id == "d1");
    CHECK(r.ranked[1].id == "d0");
    CHECK(r.ranked[2] == ScoredDoc{"d2", 0.0});
}

TEST_CASE("five documents against the brute-force scorer") {
    const std::vector<std::string> docs = {
        "image classification resnet imagenet", "object detection yolo coco coco",
        "speech recognition whisper audio", "image segmentation deeplab image",
        "text classification bert sentiment classification traffic"};
    const auto idx = index_of(docs);
    CHECK(bm25_retrieve(idx, "object detection traffic", 1).top()->id == "d1");
    for (const std::string q : {"image classification", "coco detection", "bert bert text", "audio",
                                "nothing here", "classification image segmentation"}) {
        const auto want = oracle::bm25_scores(docs, q);
        const auto got = idx.score_all(tokenize(q));
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < docs.size(); ++i) CHECK(close_rel(got[i], want[i]));
    }
}

TEST_CASE("non-default parameters") {
    const std::vector<std::string> docs = {"a b c a", "b b", "c d e f g h"};
    Bm25Index idx({2.0, 0.3});
    for (std::size_t i = 0; i < docs.size(); ++i) idx.add_document("d" + std::to_string(i), docs[i]);
    const auto want = oracle::bm25_scores(docs, "a b h", 2.0, 0.3);
    const auto got = idx.score_all(tokenize("a b h"));
    for (std::size_t i = 0; i < docs.size(); ++i) CHECK(close_rel(got[i], want[i]));
}

TEST_CASE("absent terms, empty queries, large k") {
    const auto idx = index_of({"x y", "y z"});
    const auto none = bm25_retrieve(idx, "qqq", 5);
    REQUIRE(none.ranked.size() == 2);
    CHECK(none.ranked[0] == ScoredDoc{"d0", 0.0});
    CHECK(bm25_retrieve(idx, "", 5).ranked.empty());
    CHECK(bm25_retrieve(idx, "y", 10).ranked.size() == 2);
    CHECK_THROWS_AS(bm25_retrieve(idx, "y", 0), Error);
}

TEST_CASE("ties break by ascending id") {
    Bm25Index idx;
    idx.add_document("b", "same words");
    idx.add_document("a", "same words");
    idx.add_document("c", "same words");
    const auto r = bm25_retrieve(idx, "same", 3);
    REQUIRE(r.ranked.size() == 3);
    CHECK(r.ranked[0].id == "a");
    CHECK(r.ranked[1].id == "b");
    CHECK(r.ranked[2].id == "c");
}

TEST_CASE("rank_top_k") {
    const std::vector<std::string> ids{"x", "y", "z", "w"};
    const std::vector<double> scores{1.0, 3.0, 3.0, 0.5};
    const auto r = rank_top_k(ids, scores, 2);
    REQUIRE(r.ranked.size() == 2);
    CHECK(r.ranked[0] == ScoredDoc{"y", 3.0});
    CHECK(r.ranked[1] == ScoredDoc{"z", 3.0});
}

TEST_CASE("fixture corpus against the brute-force scorer") {
    std::vector<std::string> docs;
    Bm25Index idx;
    for (Hub h : {Hub::TorchHub, Hub::TensorHub, Hub::HuggingFace}) {
        const auto db = fixture_db(h);
        for (const auto& r : db.records()) {
            docs.push_back(document_text(r));
            idx.add_document(r.id, docs.back());
        }
    }
    REQUIRE(docs.size() == 50);
    for (const std::string q : {"classify images with imagenet accuracy above 80", "speech to text",
                                "summarize news articles", "pytorch vision densenet121"}) {
        const auto want = oracle::bm25_scores(docs, q);
        const auto got = idx.score_all(tokenize(q));
        for (std::size_t i = 0; i < docs.size(); ++i) CHECK(close_rel(got[i], want[i]));
    }
}

TEST_CASE("index JSON round-trip") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto idx = build_bm25(db);
    const auto again = Bm25Index::from_json(idx.to_json());
    CHECK(again.doc_count() == idx.doc_count());
    CHECK(again.all_postings() == idx.all_postings());
    const auto q = tokenize("pretrained image model");
    CHECK(again.score_all(q) == idx.score_all(q));
    CHECK_THROWS_AS(build_bm25(ApiDatabase{}), Error);
}

TEST_CASE("batch retrieval agrees with the serial reference") {
    const auto db = fixture_db(Hub::HuggingFace);
    const auto idx = build_bm25(db);
    std::vector<std::string> queries;
    for (const auto& e : testing_support::fixture_examples(Hub::HuggingFace)) queries.push_back(e.instruction);
    const auto par = bm25_retrieve_batch(idx, queries, 3);
    const auto ser = bm25_retrieve_batch_serial(idx, queries, 3);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i].ranked == ser[i].ranked);
}

TEST_CASE("hashed embeddings") {
    HashedBagOfWords emb(64);
    const auto v = emb.embed("depth estimation from a single image");
    CHECK(v.size() == 64);
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0));
    CHECK(emb.embed("Depth estimation, from a single IMAGE") == v);
    const std::vector<double> zero(64, 0.0);
    CHECK(cosine_similarity(v, zero) == 0.0);
    CHECK(cosine_similarity(emb.embed(""), emb.embed("")) == 0.0);
    CHECK_THROWS_AS(HashedBagOfWords(0), Error);
}

TEST_CASE("embedding retrieval ranks the document itself first") {
    const auto db = fixture_db(Hub::TensorHub);
    HashedBagOfWords emb;
    const auto index = build_embedding_index(db, emb);
    for (const auto& r : db.records()) {
        const auto res = embed_retrieve(index, emb, document_text(r), 1);
        REQUIRE(res.top() != nullptr);
        CHECK(res.top()->id == r.id);
    }
}

TEST_CASE("oracle retrieval") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto res = oracle_retrieve(EvalExample{"e", "anything", "th-hybridnets", Hub::TorchHub}, db);
    REQUIRE(res.ranked.size() == 1);
    CHECK(res.ranked[0] == ScoredDoc{"th-hybridnets", 1.0});
    CHECK_THROWS_AS(oracle_retrieve(EvalExample{"e", "x", "missing", Hub::TorchHub}, db), Error);
    OracleRetriever r(db);
    CHECK(r.retrieve(EvalExample{"e", "x", "th-vgg16", Hub::TorchHub}, 3).top()->id == "th-vgg16");
}

}
