#include "hubeval/subtree_matcher.hpp"

#include "oracles/classify_oracle.hpp"
#include "support/support.hpp"

#include <doctest.h>

using namespace hubeval;
using testing_support::fixture_db;
using testing_support::make_record;

namespace {

Outcome::Kind kind_of(oracle::Kind k) {
    switch (k) {
        case oracle::Kind::Correct: return Outcome::Kind::Correct;
        case oracle::Kind::WrongApi: return Outcome::Kind::WrongApi;
        case oracle::Kind::Hallucination: break;
    }
    return Outcome::Kind::Hallucination;
}

}  // namespace

TEST_SUITE("subtree_matcher") {

TEST_CASE("default specs name the hub entry points") {
    const auto torch = default_spec(Hub::TorchHub);
    REQUIRE(torch.rules.size() == 1);
    CHECK(torch.rules[0].required == std::vector<std::string>{"repo_or_dir", "model"});
    const auto tf = default_spec(Hub::TensorHub);
    CHECK(tf.rule_for({"hub", "KerasLayer"}) != nullptr);
    CHECK(tf.rule_for({"hub", "load"}) != nullptr);
    CHECK(tf.rule_for({"hub", "load"})->required == std::vector<std::string>{"handle"});
    const auto hf = default_spec(Hub::HuggingFace, nullptr);
    REQUIRE(hf.rule_for({"pipeline"}) != nullptr);
    CHECK(hf.rule_for({"pipeline"})->required == std::vector<std::string>{"task"});
    CHECK(hf.special_rules() == std::vector<std::string>{"pipeline-task"});
    const auto db = fixture_db(Hub::HuggingFace);
    const auto full = default_spec(Hub::HuggingFace, &db);
    const auto* r = full.rule_for({"AutoModel", "from_pretrained"});
    REQUIRE(r != nullptr);
    CHECK(r->required == std::vector<std::string>{"pretrained_model_name_or_path"});
}

TEST_CASE("spec JSON round-trip matches the shipped spec file") {
    const auto db = fixture_db(Hub::HuggingFace);
    const auto spec = default_spec(Hub::HuggingFace, &db);
    const auto again = match_spec_from_json(match_spec_to_json(spec));
    CHECK(again.rules == spec.rules);
    const auto shipped = load_match_spec(testing_support::data_dir() / "specs" / "huggingface.json");
    CHECK(shipped.rules == spec.rules);
}

TEST_CASE("densenet121 with positional arguments matches, pretrained ignored") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    CHECK(classify("torch.hub.load('pytorch/vision', 'densenet121', pretrained=True)", "th-densenet121", db, spec) ==
          Outcome::correct());
    CHECK(classify("torch.hub.load('pytorch/vision', 'densenet121')", "th-densenet121", db, spec) ==
          Outcome::correct());
    CHECK(classify("torch.hub.load('pytorch/vision', 'densenet121', pretrained=False)", "th-densenet121", db,
                   spec) == Outcome::correct());
}

TEST_CASE("densenet201 is not densenet121") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    CHECK(classify("torch.hub.load('pytorch/vision', 'densenet201', pretrained=True)", "th-densenet121", db,
                   spec) == Outcome::hallucination());
}

TEST_CASE("another record's call is a wrong API") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    CHECK(classify("m = torch.hub.load('pytorch/vision', 'resnet50')", "th-densenet121", db, spec) ==
          Outcome::wrong_api("th-resnet50"));
}

TEST_CASE("two-record database") {
    ApiDatabase db(Hub::TorchHub, {make_record("a", "torch.hub.load('r', 'm1')"),
                                   make_record("b", "torch.hub.load(repo_or_dir='r', model='m2')")});
    const auto spec = default_spec(Hub::TorchHub);
    CHECK(classify("torch.hub.load(model='m2', repo_or_dir='r')", "a", db, spec) == Outcome::wrong_api("b"));
    CHECK(classify("torch.hub.load('r', model='m1')", "a", db, spec) == Outcome::correct());
    CHECK(classify("torch.hub.load('q', 'm1')", "a", db, spec) == Outcome::hallucination());
    CHECK(classify("torch.hub.list('r', 'm1')", "a", db, spec) == Outcome::hallucination());
    CHECK_THROWS_AS(classify("torch.hub.load('r', 'm1')", "zzz", db, spec), Error);
}

TEST_CASE("imagined HuggingFace models are hallucinations") {
    const auto db = fixture_db(Hub::HuggingFace);
    const auto spec = default_spec(Hub::HuggingFace, &db);
    CHECK(classify("generate_video = pipeline(\"text-to-video\", model=\"your_model_name\")", "hf-intel_dpt_large",
                   db, spec) == Outcome::hallucination());
    CHECK(classify("vqa = pipeline(\"visual-question-answering\", model=\"microsoft/clip-vqa-base\", "
                   "tokenizer=\"microsoft/clip-vqa-base\")",
                   "hf-vilt_vqa", db, spec) == Outcome::hallucination());
    CHECK(classify("depth_estimator = pipeline(\"depth-estimation\", model=\"intel-isl/MiDaS\", "
                   "tokenizer=\"intel-isl/MiDaS\")",
                   "hf-intel_dpt_large", db, spec) == Outcome::hallucination());
}

TEST_CASE("pipeline without a model matches on task alone") {
    const auto db = fixture_db(Hub::HuggingFace);
    const auto spec = default_spec(Hub::HuggingFace, &db);
    CHECK(classify("p = pipeline('depth-estimation')", "hf-intel_dpt_large", db, spec) == Outcome::correct());
    CHECK(classify("p = pipeline(task='summarization')", "hf-intel_dpt_large", db, spec) ==
          Outcome::wrong_api("hf-bart_large_cnn"));
}

TEST_CASE("from_pretrained requires the model name") {
    const auto db = fixture_db(Hub::HuggingFace);
    const auto spec = default_spec(Hub::HuggingFace, &db);
    CHECK(classify("AutoModel.from_pretrained('bert-base-uncased')", "hf-bert_base_uncased", db, spec) ==
          Outcome::correct());
    CHECK(classify("AutoModel.from_pretrained(pretrained_model_name_or_path='bert-base-uncased')",
                   "hf-bert_base_uncased", db, spec) == Outcome::correct());
    CHECK(classify("AutoModel.from_pretrained('github-user/bert')", "hf-bert_base_uncased", db, spec) ==
          Outcome::hallucination());
}

TEST_CASE("HybridNets assistant output") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    const std::string answer =
        "<domain>: Object Detection,\n"
        "<api_call>: model = torch.hub.load('datvuthanh/hybridnets', 'hybridnets', pretrained=True),\n"
        "<api_provider>: PyTorch,\n"
        "<explanation>: Load the pretrained HybridNets model.\n"
        "<code>: import torch; model = torch.hub.load('datvuthanh/hybridnets', 'hybridnets', pretrained=True)";
    CHECK(classify(answer, "th-hybridnets", db, spec) == Outcome::correct());
}

TEST_CASE("TensorHub handle, positional or keyword") {
    const auto db = fixture_db(Hub::TensorHub);
    const auto spec = default_spec(Hub::TensorHub);
    CHECK(classify("hub.KerasLayer(handle='https://tfhub.dev/google/imagenet/mobilenet_v2_100_224/classification/4')",
                   "tf-mobilenet_v2_100_224_classification", db, spec) == Outcome::correct());
    CHECK(classify("hub.KerasLayer('https://tfhub.dev/google/imagenet/inception_v3/classification/5', "
                   "trainable=True)",
                   "tf-inception_v3_classification", db, spec) == Outcome::correct());
    CHECK(classify("hub.load('https://tfhub.dev/google/yamnet/1')", "tf-spice", db, spec) ==
          Outcome::wrong_api("tf-yamnet"));
}

TEST_CASE("first matching call wins") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    CHECK(classify("a = torch.hub.load('pytorch/vision', 'resnet50'); b = torch.hub.load('pytorch/vision', "
                   "'densenet121')",
                   "th-densenet121", db, spec) == Outcome::correct());
    CHECK(classify("a = torch.hub.load('pytorch/vision', 'resnet50'); b = torch.hub.load('pytorch/vision', "
                   "'vgg16')",
                   "th-densenet121", db, spec) == Outcome::wrong_api("th-resnet50"));
}

TEST_CASE("no calls, free prose and empty text are hallucinations") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto spec = default_spec(Hub::TorchHub);
    CHECK(classify("", "th-densenet121", db, spec) == Outcome::hallucination());
    CHECK(classify("I cannot help with that.", "th-densenet121", db, spec) == Outcome::hallucination());
}

TEST_CASE("outcome names round-trip") {
    for (auto k : {Outcome::Kind::Correct, Outcome::Kind::WrongApi, Outcome::Kind::Hallucination}) {
        CHECK(parse_outcome_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_outcome_kind("nope"), Error);
}

TEST_CASE("agrees with the brute-force comparator on every small instance") {
    std::size_t disagreements = 0;
    const auto total = oracle::for_each_small_case([&](const oracle::SmallCase& c) {
        const auto db = testing_support::tuple_db(*c.db, c.huggingface);
        const auto spec = default_spec(db.hub(), &db);
        const auto got = classify(c.candidate.render(), db.records()[c.ref].id, db, spec);
        Outcome want{kind_of(c.expected.kind), {}};
        if (c.expected.kind == oracle::Kind::WrongApi) want.matched_id = db.records()[c.expected.matched].id;
        if (!(got == want)) {
            if (disagreements < 5) {
                MESSAGE(c.candidate.render() << " vs " << (*c.db)[c.ref].render() << ": got "
                                             << to_string(got.kind) << " want " << to_string(want.kind));
            }
            ++disagreements;
        }
    });
    CHECK(total >= 10000);
    CHECK(disagreements == 0);
}

}
