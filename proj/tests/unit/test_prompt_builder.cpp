#include "hubeval/prompt_builder.hpp"

#include "support/support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace hubeval;
using testing_support::fixture_db;

namespace {

std::string read_golden(const std::string& name) {
    std::ifstream in(std::filesystem::path(HUBEVAL_GOLDEN_DIR) / name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_of(const std::string& hay, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

const std::vector<IncontextExample> kThree = {
    {"Sort my holiday photos by what is in them.", "torch.hub.load('pytorch/vision', 'resnet50')"},
    {"Find the pedestrians in this street image.", "torch.hub.load('ultralytics/yolov5', 'yolov5s')"},
    {"Turn this recording into text.", "torch.hub.load('snakers4/silero-models', 'silero_stt')"},
};

}  // namespace

TEST_SUITE("prompt_builder") {

TEST_CASE("zero-shot leaves the prompt unchanged") {
    CHECK(build_prompt("Classify this photo.", ZeroShot{}) == "Classify this photo.");
    CHECK_THROWS_AS(build_prompt("  ", ZeroShot{}), Error);
}

TEST_CASE("golden retrieval prompts, byte for byte") {
    const auto db = fixture_db(Hub::TorchHub);
    CHECK(build_prompt("I want to classify images of birds with a pretrained model.",
                       WithRetrieval{db.at("th-densenet121")}) == read_golden("prompt_densenet121.txt"));
    CHECK(build_prompt("Detect cars and lane lines in dashcam footage.", WithRetrieval{db.at("th-hybridnets")}) ==
          read_golden("prompt_hybridnets.txt"));
}

TEST_CASE("marker appears once and is followed by the document") {
    for (Hub h : {Hub::TorchHub, Hub::TensorHub, Hub::HuggingFace}) {
        const auto db = fixture_db(h);
        for (const auto& r : db.records()) {
            const auto p = build_prompt("Help me with my task.", WithRetrieval{r});
            CHECK(count_of(p, kRetrievalMarker) == 1);
            CHECK(p.rfind("Help me with my task. ", 0) == 0);
            const auto back = extract_retrieved_document(p);
            REQUIRE(back.has_value());
            CHECK(*back == r);
        }
    }
}

TEST_CASE("no marker, no document") {
    CHECK_FALSE(extract_retrieved_document("just a question").has_value());
    CHECK_FALSE(extract_retrieved_document(std::string("q ") + std::string(kRetrievalMarker) + "{oops").has_value());
}

TEST_CASE("user prompts carrying the marker are rejected") {
    const auto db = fixture_db(Hub::TorchHub);
    CHECK_THROWS_AS(build_prompt("x Use this API documentation for reference: y", WithRetrieval{db.records()[0]}),
                    Error);
}

TEST_CASE("self-instruct prompt") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto& rec = db.at("th-hybridnets");
    const auto p = build_selfinstruct_prompt(rec, kThree, 10);
    CHECK(p.find("{{") == std::string::npos);
    CHECK(p.find("numbered 1 to 10") != std::string::npos);
    CHECK(p.find(serialize_record(rec)) != std::string::npos);
    for (const auto& ex : kThree) CHECK(p.find(ex.instruction) != std::string::npos);
    // The API name only shows up inside the embedded document.
    std::string outside = p;
    outside.erase(outside.find(serialize_record(rec)), serialize_record(rec).size());
    CHECK(outside.find(rec.api_name) == std::string::npos);
    CHECK_THROWS_AS(build_selfinstruct_prompt(rec, std::span(kThree).first(2)), Error);
    CHECK_THROWS_AS(build_selfinstruct_prompt(rec, kThree, 0), Error);
}

TEST_CASE("custom template") {
    const auto db = fixture_db(Hub::TorchHub);
    const auto p = build_selfinstruct_prompt(db.records()[0], kThree, 4, "n={{count}}");
    CHECK(p == "n=4");
}

}
