// Remote completion and embedding clients against a loopback httplib server.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "hubeval/model_client.hpp"
#include "hubeval/retriever.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

using namespace hubeval;

namespace {

class LoopbackServer {
public:
    LoopbackServer() {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LoopbackServer() {
        server_.stop();
        thread_.join();
    }
    httplib::Server& server() { return server_; }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_SUITE("model_client") {

TEST_CASE("remote completions request and response") {
    LoopbackServer srv;
    std::mutex mu;
    nlohmann::json seen;
    std::string auth;
    srv.server().Post("/api/v1/completions", [&](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(mu);
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"j({"choices":[{"text":"torch.hub.load('a', 'b')"}]})j", "application/json");
    });
    ::setenv("HUBEVAL_TEST_KEY", "sekret", 1);
    RemoteModelConfig cfg;
    cfg.base_url = srv.url() + "/api";
    cfg.model = "tiny";
    cfg.api_key_env = "HUBEVAL_TEST_KEY";
    RemoteBackend remote(cfg);
    CHECK(remote.complete(CompletionRequest{"prompt text", "", 32, 0.0, "e"}) == "torch.hub.load('a', 'b')");
    CHECK(seen["model"] == "tiny");
    CHECK(seen["prompt"] == "prompt text");
    CHECK(seen["max_tokens"] == 32);
    CHECK(auth == "Bearer sekret");
}

TEST_CASE("remote chat style") {
    LoopbackServer srv;
    nlohmann::json seen;
    srv.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})", "application/json");
    });
    RemoteModelConfig cfg;
    cfg.base_url = srv.url();
    cfg.path = "/v1/chat/completions";
    cfg.style = "chat";
    cfg.model = "tiny";
    RemoteBackend remote(cfg);
    CHECK(remote.complete(CompletionRequest{"q", "override", 8, 0.0, "e"}) == "hi");
    CHECK(seen["model"] == "override");
    CHECK(seen["messages"][0]["content"] == "q");
}

TEST_CASE("server errors are retried, client errors are not") {
    LoopbackServer srv;
    std::atomic<int> calls5{0};
    std::atomic<int> calls4{0};
    srv.server().Post("/flaky/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
        if (calls5++ == 0) {
            res.status = 503;
            return;
        }
        res.set_content(R"({"choices":[{"text":"ok"}]})", "application/json");
    });
    srv.server().Post("/bad/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++calls4;
        res.status = 400;
        res.set_content("bad request", "text/plain");
    });
    RemoteModelConfig cfg;
    cfg.model = "m";
    cfg.max_retries = 2;
    cfg.base_url = srv.url() + "/flaky";
    CHECK(RemoteBackend(cfg).complete(CompletionRequest{"q", "", 8, 0.0, "e"}) == "ok");
    CHECK(calls5 == 2);
    cfg.base_url = srv.url() + "/bad";
    try {
        RemoteBackend(cfg).complete(CompletionRequest{"q", "", 8, 0.0, "e"});
        FAIL("expected a BackendError");
    } catch (const BackendError& e) {
        CHECK(e.status() == 400);
        CHECK_FALSE(e.retriable());
    }
    CHECK(calls4 == 1);
}

TEST_CASE("malformed completion body") {
    LoopbackServer srv;
    srv.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"nothing":1})", "application/json");
    });
    RemoteModelConfig cfg;
    cfg.base_url = srv.url();
    cfg.model = "m";
    CHECK_THROWS_AS(RemoteBackend(cfg).complete(CompletionRequest{"q", "", 8, 0.0, "e"}), BackendError);
}

}

TEST_SUITE("retriever") {

TEST_CASE("remote embeddings in batches") {
    LoopbackServer srv;
    std::atomic<int> calls{0};
    srv.server().Post("/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json data = nlohmann::json::array();
        for (const auto& text : body["input"]) {
            const double len = static_cast<double>(text.get<std::string>().size());
            data.push_back({{"embedding", {len, 1.0}}});
        }
        res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    RemoteEmbeddingConfig cfg;
    cfg.base_url = srv.url();
    cfg.model = "emb";
    cfg.dimension = 2;
    cfg.batch_size = 2;
    RemoteEmbeddingClient client(cfg);
    const std::vector<std::string> texts{"a", "bb", "ccc"};
    const auto vecs = client.embed_batch(texts);
    REQUIRE(vecs.size() == 3);
    CHECK(vecs[2] == std::vector<double>{3.0, 1.0});
    CHECK(calls == 2);
    CHECK(client.embed("dddd") == std::vector<double>{4.0, 1.0});
}

TEST_CASE("remote embedding dimension mismatch") {
    LoopbackServer srv;
    srv.server().Post("/v1/embeddings", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("[[1, 2, 3]]", "application/json");
    });
    RemoteEmbeddingConfig cfg;
    cfg.base_url = srv.url();
    cfg.model = "emb";
    cfg.dimension = 2;
    CHECK_THROWS_AS(RemoteEmbeddingClient(cfg).embed("x"), Error);
}

}
