// Parallel kernels against their serial references on synthetic workloads.

#include "hubeval/evaluator.hpp"
#include "hubeval/retriever.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hubeval;

namespace {

const char* const kWords[] = {"image",  "classification", "detect", "speech", "text",   "model",
                              "resnet", "bert",           "vision", "audio",  "depth",  "segment",
                              "fast",   "small",          "large",  "video",  "translate", "summarize"};

std::string words(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kWords) - 1);
    std::string s;
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + std::string(kWords[pick(rng)]);
    return s;
}

ApiDatabase synthetic_db(std::size_t n) {
    std::mt19937_64 rng(11);
    std::vector<ApiRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        ApiRecord r;
        r.id = "r" + std::to_string(i);
        r.domain = "Classification";
        r.framework = "PyTorch";
        r.functionality = words(rng, 2);
        r.api_name = "m" + std::to_string(i);
        r.api_call = "torch.hub.load(repo_or_dir='org" + std::to_string(i % 7) + "/repo', model='m" +
                     std::to_string(i) + "', pretrained=True)";
        r.api_arguments = {{"repo_or_dir", false}, {"model", false}, {"pretrained", true}};
        r.environment_requirements = "torch";
        r.example_code = "model = " + r.api_call;
        r.description = words(rng, 40);
        records.push_back(std::move(r));
    }
    return ApiDatabase(Hub::TorchHub, std::move(records));
}

struct EvalWorkload {
    ApiDatabase db = synthetic_db(300);
    MatchSpec spec = default_spec(Hub::TorchHub);
    std::vector<EvalExample> examples;
    CandidateSet candidates;

    explicit EvalWorkload(std::size_t n) {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<std::size_t> pick(0, db.size() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            const auto id = "e" + std::to_string(i);
            examples.push_back({id, "q", db.records()[pick(rng)].id, Hub::TorchHub});
            candidates.by_id[id] = Candidate{"<domain>: Classification,\n<api_call>: model = " +
                                                 db.records()[pick(rng)].api_call + ",\n<explanation>: ok",
                                             true,
                                             {}};
        }
    }
};

void BM_Evaluate(benchmark::State& state) {
    const EvalWorkload w(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(w.examples, w.candidates, w.db, w.spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateSerial(benchmark::State& state) {
    const EvalWorkload w(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_serial(w.examples, w.candidates, w.db, w.spec));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct RetrievalWorkload {
    Bm25Index index;
    std::vector<std::string> queries;

    explicit RetrievalWorkload(std::size_t n) {
        const auto db = synthetic_db(2000);
        index = build_bm25(db);
        std::mt19937_64 rng(9);
        for (std::size_t i = 0; i < n; ++i) queries.push_back(words(rng, 8));
    }
};

void BM_Bm25Batch(benchmark::State& state) {
    const RetrievalWorkload w(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bm25_retrieve_batch(w.index, w.queries, 5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Bm25BatchSerial(benchmark::State& state) {
    const RetrievalWorkload w(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(bm25_retrieve_batch_serial(w.index, w.queries, 5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Evaluate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bm25Batch)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bm25BatchSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
