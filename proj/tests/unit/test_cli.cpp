#include "hubeval/cli.hpp"
#include "hubeval/evaluator.hpp"
#include "hubeval/prompt_builder.hpp"

#include "support/support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace hubeval;
using testing_support::fixture;
using testing_support::fixture_db;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// The JSON error record is the last line of stderr.
ordered_json error_record(const std::string& err) {
    auto trimmed = err;
    while (!trimmed.empty() && trimmed.back() == '\n') trimmed.pop_back();
    return ordered_json::parse(trimmed.substr(trimmed.rfind('\n') + 1));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("unknown flag is a usage error") {
    const auto r = run({"evaluate", "--no-such-flag"});
    CHECK(r.code == cli::kUsage);
    const auto rec = error_record(r.err);
    CHECK(rec["error"]["kind"] == "usage");
    CHECK(rec["error"]["command"] == "evaluate");
}

TEST_CASE("no subcommand is a usage error; --version succeeds") {
    CHECK(run({}).code == cli::kUsage);
    const auto v = run({"--version"});
    CHECK(v.code == cli::kOk);
    CHECK(v.out.find(std::string(cli::kToolVersion)) != std::string::npos);
}

TEST_CASE("missing input files are usage errors") {
    const auto dir = testing_support::temp_dir("cli_missing");
    const auto r = run({"validate", "--hub", "torchhub", (dir / "nope.jsonl").string(), "--out", dir.string()});
    CHECK(r.code == cli::kUsage);
    CHECK(error_record(r.err)["error"]["message"].get<std::string>().find("nope.jsonl") != std::string::npos);
}

TEST_CASE("a malformed database is a failure") {
    const auto dir = testing_support::temp_dir("cli_bad_db");
    std::ofstream(dir / "bad.jsonl") << "{\"id\": 1\n";
    const auto r = run({"validate", "--hub", "torchhub", (dir / "bad.jsonl").string(), "--out", dir.string()});
    CHECK(r.code == cli::kFailure);
    CHECK(error_record(r.err)["error"]["kind"] == "failure");
}

TEST_CASE("evaluate ground truth prints 100.00") {
    const auto dir = testing_support::temp_dir("cli_eval");
    const auto r = run({"evaluate", "--hub", "torchhub", "--db", fixture("torchhub.jsonl").string(), "--examples",
                        fixture("torchhub_examples.jsonl").string(), "--candidates",
                        fixture("replay/torchhub_groundtruth.jsonl").string(), "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("overall 100.00") != std::string::npos);
    CHECK(r.out.find("hallucination 0.00") != std::string::npos);
    const auto rep = load_report(dir / "report.json");
    CHECK(rep.setting.model == "ground-truth");
    CHECK(rep.counts.correct == testing_support::fixture_examples(Hub::TorchHub).size());
}

TEST_CASE("config file supplies paths relative to itself") {
    const auto dir = testing_support::temp_dir("cli_config");
    const auto r = run({"evaluate", "--config", fixture("run_torchhub.json").string(), "--candidates",
                        fixture("replay/torchhub_mixed.jsonl").string(), "--out", dir.string(), "--name",
                        "mixed"});
    REQUIRE(r.code == cli::kOk);
    const auto rep = load_report(dir / "mixed.json");
    CHECK(rep.counts.total() == testing_support::fixture_examples(Hub::TorchHub).size());
    CHECK(rep.counts.wrong_api > 0);
}

TEST_CASE("retrieve oracle prints the reference record") {
    const auto r = run({"retrieve", "--hub", "torchhub", "--db", fixture("torchhub.jsonl").string(), "--mode",
                        "oracle", "--examples", fixture("torchhub_examples.jsonl").string(), "--example-id",
                        "th-ex-004"});
    REQUIRE(r.code == cli::kOk);
    const auto j = ordered_json::parse(r.out);
    CHECK(j["results"][0]["id"] == "th-hybridnets");
}

TEST_CASE("prompt prints exactly the built prompt") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto r = run({"prompt", "--hub", "torchhub", "--db", fixture("torchhub.jsonl").string(), "--query",
                        "Detect lanes.", "--with-doc", "th-hybridnets"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out == build_prompt("Detect lanes.", WithRetrieval{db.at("th-hybridnets")}));
}

TEST_CASE("parse shows extracted calls") {
    const auto r = run({"parse", "--text", "m = torch.hub.load('a/b', 'c'); print(m)"});
    REQUIRE(r.code == cli::kOk);
    const auto j = ordered_json::parse(r.out);
    REQUIRE(j["calls"].size() == 2);
    CHECK(j["calls"][0]["callee"] == "torch.hub.load");
}

TEST_CASE("split writes headed id files") {
    const auto dir = testing_support::temp_dir("cli_split");
    const auto r = run({"split", fixture("huggingface_examples.jsonl").string(), "--hub", "huggingface", "--seed",
                        "3", "--out", dir.string()});
    REQUIRE(r.code == cli::kOk);
    const auto train = load_id_list(dir / "train_ids.txt");
    const auto test = load_id_list(dir / "test_ids.txt");
    CHECK(train.size() + test.size() == testing_support::fixture_examples(Hub::HuggingFace).size());
    CHECK(slurp(dir / "test_ids.txt").rfind("# {", 0) == 0);
}

}
