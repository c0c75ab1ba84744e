#include "hubeval/call_parser.hpp"
#include "hubeval/common.hpp"

#include <doctest.h>

using namespace hubeval;

TEST_SUITE("call_parser") {

TEST_CASE("hub.load assignment yields one call with a string positional") {
    const auto calls = parse_calls("detector = hub.load('https://tfhub.dev/google/openimages_v4/ssd_mobilenet_v2/1')");
    REQUIRE(calls.size() == 1);
    CHECK(calls[0].callee == std::vector<std::string>{"hub", "load"});
    REQUIRE(calls[0].positional.size() == 1);
    REQUIRE(calls[0].positional[0].is<StringLit>());
    CHECK(calls[0].positional[0].as<StringLit>()->text ==
          "https://tfhub.dev/google/openimages_v4/ssd_mobilenet_v2/1");
    CHECK(calls[0].keyword.empty());
}

TEST_CASE("plain assignment has no calls") { CHECK(parse_calls("x = 5").empty()); }

TEST_CASE("HybridNets assistant call") {
    const auto calls =
        parse_calls("model = torch.hub.load('datvuthanh/hybridnets', 'hybridnets', pretrained=True)");
    REQUIRE(calls.size() == 1);
    CHECK(calls[0].callee_path() == "torch.hub.load");
    REQUIRE(calls[0].positional.size() == 2);
    CHECK(calls[0].positional[0].as<StringLit>()->text == "datvuthanh/hybridnets");
    CHECK(calls[0].positional[1].as<StringLit>()->text == "hybridnets");
    REQUIRE(calls[0].keyword.size() == 1);
    CHECK(calls[0].keyword[0].name == "pretrained");
    REQUIRE(calls[0].keyword[0].value.is<BoolLit>());
    CHECK(calls[0].keyword[0].value.as<BoolLit>()->value);
}

TEST_CASE("calls are listed in textual order and nested calls stay inside") {
    const auto calls = parse_calls(
        "import torch; m = torch.hub.load('a/b', 'c'); x = foo(bar(1), k=[1, 'x'])\n"
        "print(m)");
    REQUIRE(calls.size() == 3);
    CHECK(calls[0].callee_path() == "torch.hub.load");
    CHECK(calls[1].callee_path() == "foo");
    REQUIRE(calls[1].positional.size() == 1);
    CHECK(calls[1].positional[0].is<Box<CallNode>>());
    REQUIRE(calls[1].keyword.size() == 1);
    CHECK(calls[1].keyword[0].value.is<ListLit>());
    CHECK(calls[2].callee_path() == "print");
}

TEST_CASE("keywords, definitions and method tails are not calls") {
    CHECK(parse_calls("if (x): pass").empty());
    const auto calls = parse_calls("def f(a): return g(a)");
    REQUIRE(calls.size() == 1);
    CHECK(calls[0].callee_path() == "g");
    const auto chained = parse_calls("out = pipeline('summarization').to('cuda')");
    REQUIRE(chained.size() == 1);
    CHECK(chained[0].callee_path() == "pipeline");
}

TEST_CASE("string forms and escapes") {
    const auto calls = parse_calls(R"(f("dq", 'it\'s', r'raw\n', """tri""", b'x'))");
    REQUIRE(calls.size() == 1);
    REQUIRE(calls[0].positional.size() == 5);
    CHECK(calls[0].positional[0].as<StringLit>()->text == "dq");
    CHECK(calls[0].positional[1].as<StringLit>()->text == "it's");
    CHECK(calls[0].positional[2].as<StringLit>()->text == "raw\\n");
    CHECK(calls[0].positional[3].as<StringLit>()->text == "tri");
    CHECK(calls[0].positional[4].as<StringLit>()->text == "x");
}

TEST_CASE("None and unmodelled expressions become identifiers") {
    const auto calls = parse_calls("f(None, a.b, x + 1, dtype=tf.string)");
    REQUIRE(calls.size() == 1);
    CHECK(calls[0].positional[0].as<Identifier>()->name == "None");
    CHECK(calls[0].positional[1].as<Identifier>()->name == "a.b");
    CHECK(calls[0].positional[2].is<Identifier>());
    CHECK(calls[0].keyword_value("dtype")->as<Identifier>()->name == "tf.string");
}

TEST_CASE("duplicate keyword rejects the call") { CHECK(parse_calls("f(a=1, a=2)").empty()); }

TEST_CASE("unbalanced text does not throw") {
    CHECK_NOTHROW(parse_calls("torch.hub.load('pytorch/vision', 'densenet121'"));
    CHECK_NOTHROW(parse_calls("f('unterminated)"));
    CHECK_NOTHROW(parse_calls(")))((("));
}

TEST_CASE("canonicalize moves positionals into named slots") {
    const auto call = parse_calls("torch.hub.load('pytorch/vision', 'densenet121', pretrained=True)")[0];
    const auto c = canonicalize(call, {"repo_or_dir", "model", "pretrained"});
    CHECK(c.positional.empty());
    CHECK(c.keyword_value("repo_or_dir")->as<StringLit>()->text == "pytorch/vision");
    CHECK(c.keyword_value("model")->as<StringLit>()->text == "densenet121");
    CHECK(c.keyword_value("pretrained")->as<BoolLit>()->value);
}

TEST_CASE("canonicalize without positionals is the identity") {
    const auto call = parse_calls("f(a=1, b='x')")[0];
    CHECK(canonicalize(call, {"a", "b"}) == call);
}

TEST_CASE("canonicalize errors") {
    const auto call = parse_calls("f(1, 2, 3)")[0];
    CHECK_THROWS_AS(canonicalize(call, {"a", "b"}), Error);
    const auto clash = parse_calls("f(1, a=2)")[0];
    CHECK_THROWS_AS(canonicalize(clash, {"a", "b"}), Error);
}

TEST_CASE("canonical source round-trips") {
    for (const char* src : {"torch.hub.load('pytorch/vision', 'densenet121', pretrained=True)",
                            "f(1.5, -2, [1, 'a', None], g(x=True), k='it\\'s')",
                            "pipeline('depth-estimation', model='Intel/dpt-large')"}) {
        const auto a = parse_calls(src);
        REQUIRE(a.size() == 1);
        const auto printed = to_source(a[0]);
        const auto b = parse_calls(printed);
        REQUIRE(b.size() == 1);
        CHECK(a[0] == b[0]);
        CHECK(to_source(b[0]) == printed);
    }
}

TEST_CASE("values_match trims strings and separates identifiers from literals") {
    CHECK(values_match(make_string(" a "), make_string("a")));
    CHECK_FALSE(values_match(make_string("A"), make_string("a")));
    CHECK_FALSE(values_match(make_identifier("x"), make_string("x")));
    CHECK(values_match(make_number(1), make_number(1.0)));
}

TEST_CASE("structured output from the assistant text") {
    const std::string text =
        "<domain>: image-object-detection,\n"
        "<api_call>: detector = hub.load('https://tfhub.dev/google/openimages_v4/ssd_mobilenet_v2/1'),\n"
        "<api_provider>: TensorFlow Hub,\n"
        "<explanation>: This API call loads the pre-trained detector.\n"
        "<code>: import tensorflow_hub as hub";
    const auto s = parse_structured_output(text);
    REQUIRE(s.has_value());
    CHECK(s->domain == "image-object-detection");
    CHECK(s->api_provider == "TensorFlow Hub");
    REQUIRE(s->api_call.has_value());
    CHECK(s->api_call->find("hub.load('https://tfhub.dev/google/openimages_v4/ssd_mobilenet_v2/1')") !=
          std::string::npos);
}

TEST_CASE("structured output with a single tag") {
    const auto s = parse_structured_output("<domain>: Object Detection");
    REQUIRE(s.has_value());
    CHECK(s->domain == "Object Detection");
    CHECK_FALSE(s->api_call.has_value());
    CHECK_FALSE(s->code.has_value());
}

TEST_CASE("free prose is not structured output") {
    CHECK_FALSE(parse_structured_output("Just load a model from the hub.").has_value());
}

}
