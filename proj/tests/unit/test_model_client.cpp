#include "hubeval/model_client.hpp"
#include "hubeval/prompt_builder.hpp"
#include "hubeval/subtree_matcher.hpp"

#include "support/support.hpp"

#include <doctest.h>

#include <fstream>

using namespace hubeval;
using testing_support::fixture;
using testing_support::fixture_db;
using testing_support::fixture_examples;

TEST_SUITE("model_client") {

TEST_CASE("request validation") {
    CompletionRequest r{"p", "m", 0, 0.0, "e"};
    CHECK_THROWS_AS(r.validate(), Error);
    r.max_tokens = 1;
    r.temperature = -0.5;
    CHECK_THROWS_AS(r.validate(), Error);
    r.temperature = 0.0;
    CHECK_NOTHROW(r.validate());
}

TEST_CASE("echo returns the prompt") {
    EchoBackend echo;
    CHECK(echo.complete(CompletionRequest{"hello there", "", 16, 0.0, "e"}) == "hello there");
    CHECK(echo.provenance() == Provenance{Provenance::Kind::Mock, "echo"});
}

TEST_CASE("copy-doc returns the retrieved api_call") {
    const auto db = fixture_db(Hub::TorchHub);
    CopyDocBackend copy;
    const auto& rec = db.at("th-vgg16");
    CHECK(copy.complete(CompletionRequest{build_prompt("q", WithRetrieval{rec}), "", 16, 0.0, "e"}) ==
          rec.api_call);
    CHECK(copy.complete(CompletionRequest{"q", "", 16, 0.0, "e"}).empty());
}

TEST_CASE("replay hit, miss and stored failure") {
    CandidateSet set;
    set.by_id["a"] = Candidate{"torch.hub.load('r', 'm')", true, {}};
    set.by_id["b"] = Candidate{"", false, "timeout"};
    ReplayBackend replay(set, "unit");
    CHECK(replay.complete(CompletionRequest{"x", "", 8, 0.0, "a"}) == "torch.hub.load('r', 'm')");
    CHECK_THROWS_AS(replay.complete(CompletionRequest{"x", "", 8, 0.0, "zzz"}), Error);
    CHECK_THROWS_AS(replay.complete(CompletionRequest{"x", "", 8, 0.0, "b"}), BackendError);
    CHECK(replay.provenance() == Provenance{Provenance::Kind::Replay, "unit"});
}

TEST_CASE("replay file takes its label from the header") {
    ReplayBackend replay(fixture("replay/torchhub_groundtruth.jsonl"));
    CHECK(replay.provenance().label == "ground-truth");
}

TEST_CASE("candidate JSONL round-trip") {
    CandidateSet set;
    set.provenance = {Provenance::Kind::Remote, "some-model"};
    set.by_id["x2"] = Candidate{"line one\nline \"two\"", true, {}};
    set.by_id["x1"] = Candidate{"", false, "HTTP 500"};
    const auto text = candidates_to_jsonl(set, ordered_json{{"retriever", "bm25"}});
    CHECK(text.find("\"retriever\":\"bm25\"") != std::string::npos);
    CHECK(text.find("x1") < text.find("x2"));
    CHECK(parse_candidates(text) == set);
    CHECK_THROWS_AS(parse_candidates("{\"example_id\":\"a\",\"text\":\"\",\"ok\":true}\n"
                                     "{\"example_id\":\"a\",\"text\":\"\",\"ok\":true}\n"),
                    Error);
}

TEST_CASE("generate with echo keys outputs by example id") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto examples = fixture_examples(Hub::TorchHub);
    EchoBackend echo;
    const auto set = generate_candidates(examples, nullptr, db, echo, {"", 64, 0.0, 3});
    REQUIRE(set.by_id.size() == examples.size());
    for (const auto& e : examples) {
        const auto* c = set.find(e.id);
        REQUIRE(c != nullptr);
        CHECK(c->ok);
        CHECK(c->text == e.instruction);
    }
    CHECK(set.provenance.label == "echo");
}

TEST_CASE("oracle retrieval with copy-doc answers every example correctly") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto examples = fixture_examples(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    OracleRetriever oracle(db);
    CopyDocBackend copy;
    const auto set = generate_candidates(examples, &oracle, db, copy, {});
    for (const auto& e : examples) {
        const auto* c = set.find(e.id);
        REQUIRE(c != nullptr);
        CHECK(classify(c->text, e.reference_id, db, spec) == Outcome::correct());
    }
}

TEST_CASE("ground-truth replay answers every example correctly") {
    const auto db = fixture_db(Hub::TensorHub);
    const auto examples = fixture_examples(Hub::TensorHub);
    const auto spec = default_spec(Hub::TensorHub);
    ReplayBackend replay(fixture("replay/tensorhub_groundtruth.jsonl"));
    const auto set = generate_candidates(examples, nullptr, db, replay, {});
    for (const auto& e : examples) {
        REQUIRE(set.find(e.id) != nullptr);
        CHECK(classify(set.find(e.id)->text, e.reference_id, db, spec) == Outcome::correct());
    }
}

TEST_CASE("an unreachable remote backend fails every example without aborting") {
    const auto db = fixture_db(Hub::TorchHub);
    auto examples = fixture_examples(Hub::TorchHub);
    examples.resize(3);
    RemoteModelConfig cfg;
    cfg.base_url = "http://127.0.0.1:1";
    cfg.model = "m";
    cfg.timeout_seconds = 1;
    cfg.max_retries = 0;
    RemoteBackend remote(cfg);
    const auto set = generate_candidates(examples, nullptr, db, remote, {});
    REQUIRE(set.by_id.size() == 3);
    for (const auto& [id, c] : set.by_id) {
        CHECK_FALSE(c.ok);
        CHECK_FALSE(c.error.empty());
    }
    CHECK(set.provenance == Provenance{Provenance::Kind::Remote, "m"});
}

TEST_CASE("remote config parsing") {
    CHECK_THROWS_AS(RemoteModelConfig::from_json(ordered_json{{"model", "m"}}), Error);
    CHECK_THROWS_AS(RemoteModelConfig::from_json(ordered_json{{"base_url", "http://x"}, {"model", "m"},
                                                              {"style", "smoke-signals"}}),
                    Error);
    const auto c = RemoteModelConfig::from_json(
        ordered_json{{"base_url", "http://x"}, {"model", "m"}, {"style", "chat"}, {"max_retries", 0}});
    CHECK(c.style == "chat");
    CHECK(c.max_retries == 0);
    CHECK(c.path == "/v1/completions");
}

}
