#include "hubeval/cli.hpp"

#include "hubeval/api_registry.hpp"
#include "hubeval/call_parser.hpp"
#include "hubeval/constraint_checker.hpp"
#include "hubeval/eval_example.hpp"
#include "hubeval/evaluator.hpp"
#include "hubeval/instruction_gen.hpp"
#include "hubeval/model_client.hpp"
#include "hubeval/prompt_builder.hpp"
#include "hubeval/retriever.hpp"
#include "hubeval/subtree_matcher.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace hubeval::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::optional<std::string> config, out, hub, db, examples, ids, candidates, match_spec,
        retriever, index, backend, replay, remote_config, embedding_config, model_name, constraints,
        pool, query, with_doc, example_id, text, name, model_label, retriever_label, mode;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::size_t> k, n, dimension;
    std::optional<double> k1, b;
    bool domain_only = false;
    std::vector<std::string> reports;
};

// Resolves every setting as flag, then config file, then default, and records
// what was used so the artifact header can hash it.
class Context {
public:
    Context(const Options& o, std::string command) : command_(std::move(command)) {
        if (o.config) {
            const fs::path p(*o.config);
            if (!fs::is_regular_file(p)) throw UsageError("config file not found: " + p.string());
            try {
                config_ = ordered_json::parse(read_file(p));
            } catch (const nlohmann::json::exception& e) {
                throw UsageError("config " + p.string() + ": " + e.what());
            }
            if (!config_.is_object()) throw UsageError("config must be a JSON object");
            config_dir_ = p.parent_path();
        }
        effective_["command"] = command_;
    }

    template <class T>
    std::optional<T> value(const std::string& key, const std::optional<T>& flag) {
        std::optional<T> v = flag;
        if (!v && config_.contains(key)) {
            try {
                v = config_[key].get<T>();
            } catch (const nlohmann::json::exception& e) {
                throw UsageError("config key '" + key + "': " + e.what());
            }
        }
        if (v) effective_[key] = *v;
        return v;
    }

    template <class T>
    T value_or(const std::string& key, const std::optional<T>& flag, T fallback) {
        if (auto v = value(key, flag)) return *v;
        effective_[key] = fallback;
        return fallback;
    }

    std::string require(const std::string& key, const std::optional<std::string>& flag) {
        auto v = value(key, flag);
        if (!v || v->empty()) throw UsageError("missing required setting --" + dashed(key));
        return *v;
    }

    std::optional<fs::path> opt_path(const std::string& key, const std::optional<std::string>& flag) {
        std::optional<fs::path> p;
        if (flag) {
            p = fs::path(*flag);
        } else if (config_.contains(key) && config_[key].is_string()) {
            p = config_dir_ / config_[key].get<std::string>();
        } else if (key == "db" && config_.contains("databases")) {
            const auto h = std::string(to_string(hub()));
            if (config_["databases"].contains(h)) {
                p = config_dir_ / config_["databases"][h].get<std::string>();
            }
        }
        if (!p) return p;
        if (!fs::is_regular_file(*p)) {
            throw UsageError("--" + dashed(key) + ": file not found: " + p->string());
        }
        effective_[key] = {{"fnv1a64", hex64(fnv1a64(read_file(*p)))}};
        return p;
    }

    fs::path path(const std::string& key, const std::optional<std::string>& flag) {
        auto p = opt_path(key, flag);
        if (!p) throw UsageError("missing required setting --" + dashed(key));
        return *p;
    }

    void set_hub_flag(const std::optional<std::string>& flag) { hub_flag_ = flag; }

    Hub hub() {
        if (!hub_) {
            const auto text = value("hub", hub_flag_);
            if (!text) throw UsageError("missing required setting --hub");
            try {
                hub_ = parse_hub(*text);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }
        return *hub_;
    }

    std::uint64_t seed(const std::optional<std::uint64_t>& flag) {
        seed_ = value_or<std::uint64_t>("seed", flag, 0);
        return seed_;
    }

    fs::path out_dir(const std::optional<std::string>& flag) const {
        if (flag) return fs::path(*flag);
        if (config_.contains("output_dir")) return config_dir_ / config_["output_dir"].get<std::string>();
        return fs::path("out");
    }

    void note(const std::string& key, ordered_json v) { effective_[key] = std::move(v); }

    ordered_json header() const {
        ordered_json h = ordered_json::object();
        h["tool"] = "hubeval";
        h["version"] = std::string(kToolVersion);
        h["command"] = command_;
        h["config_hash"] = hex64(fnv1a64(effective_.dump()));
        h["seed"] = seed_;
        return h;
    }

private:
    static std::string dashed(std::string key) {
        std::replace(key.begin(), key.end(), '_', '-');
        return key;
    }

    std::string command_;
    ordered_json config_ = ordered_json::object();
    fs::path config_dir_;
    ordered_json effective_ = ordered_json::object();
    std::optional<std::string> hub_flag_;
    std::optional<Hub> hub_;
    std::uint64_t seed_ = 0;
};

std::vector<EvalExample> select_examples(Context& ctx, const Options& o, Hub hub) {
    auto examples = load_examples(ctx.path("examples", o.examples));
    std::erase_if(examples, [&](const EvalExample& e) { return e.hub != hub; });
    if (const auto ids_path = ctx.opt_path("ids", o.ids)) {
        const auto ids = load_id_list(*ids_path);
        const std::set<std::string> wanted(ids.begin(), ids.end());
        std::set<std::string> present;
        for (const auto& e : examples) present.insert(e.id);
        for (const auto& id : ids) {
            if (present.count(id) == 0) throw Error("id list names unknown example '" + id + "'");
        }
        std::erase_if(examples, [&](const EvalExample& e) { return wanted.count(e.id) == 0; });
    }
    return examples;
}

MatchSpec resolve_spec(Context& ctx, const Options& o, const ApiDatabase& db) {
    if (const auto p = ctx.opt_path("match_spec", o.match_spec)) {
        auto spec = load_match_spec(*p);
        if (spec.hub != db.hub()) throw UsageError("match spec hub differs from --hub");
        return spec;
    }
    return default_spec(db.hub(), &db);
}

Bm25Index resolve_index(Context& ctx, const Options& o, const ApiDatabase& db) {
    if (const auto p = ctx.opt_path("index", o.index)) {
        auto index = Bm25Index::from_json(ordered_json::parse(read_file(*p)));
        if (index.doc_count() != db.size()) throw Error("index does not match the database size");
        for (const auto& id : index.doc_ids()) {
            if (!db.contains(id)) throw Error("index document '" + id + "' is not in the database");
        }
        return index;
    }
    const Bm25Params params{ctx.value_or("k1", o.k1, 1.2), ctx.value_or("b", o.b, 0.75)};
    return build_bm25(db, params);
}

std::unique_ptr<EmbeddingProvider> resolve_embedder(Context& ctx, const Options& o) {
    if (const auto p = ctx.opt_path("embedding_config", o.embedding_config)) {
        return std::make_unique<RemoteEmbeddingClient>(
            RemoteEmbeddingConfig::from_json(ordered_json::parse(read_file(*p))));
    }
    return std::make_unique<HashedBagOfWords>(ctx.value_or<std::size_t>("dimension", o.dimension, 256));
}

std::unique_ptr<CompletionBackend> resolve_backend(Context& ctx, const Options& o,
                                                   std::initializer_list<std::string_view> allowed) {
    const auto kind = ctx.require("backend", o.backend);
    if (std::find(allowed.begin(), allowed.end(), kind) == allowed.end()) {
        throw UsageError("unsupported --backend '" + kind + "'");
    }
    if (kind == "replay") return std::make_unique<ReplayBackend>(ctx.path("replay", o.replay));
    if (kind == "remote") {
        return std::make_unique<RemoteBackend>(RemoteModelConfig::load(ctx.path("remote_config", o.remote_config)));
    }
    if (kind == "copy-doc") return std::make_unique<CopyDocBackend>();
    return std::make_unique<EchoBackend>();
}

void apply_jobs(Context& ctx, const Options& o) {
    if (const auto jobs = ctx.value<int>("jobs", o.jobs)) {
        if (*jobs < 1) throw UsageError("--jobs must be at least 1");
        omp_set_num_threads(*jobs);
    }
}

std::size_t job_count(const Options& o) { return o.jobs ? static_cast<std::size_t>(*o.jobs) : 4; }

ordered_json with_header(const ordered_json& header, const ordered_json& body) {
    ordered_json j = ordered_json::object();
    j["_header"] = header;
    for (const auto& [k, v] : body.items()) {
        if (k != "_header") j[k] = v;
    }
    return j;
}

std::string id_file(const ordered_json& header, const std::vector<std::string>& ids) {
    std::string s = "# " + header.dump() + "\n";
    for (const auto& id : ids) s += id + "\n";
    return s;
}

ordered_json results_json(const RetrievalResult& r) {
    ordered_json a = ordered_json::array();
    for (const auto& d : r.ranked) a.push_back({{"id", d.id}, {"score", d.score}});
    return a;
}

std::string fixed2(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v;
    return s.str();
}

// Extra header fields written by `generate` (e.g. the retriever used).
ordered_json candidates_header(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (!j.is_discarded() && j.contains("_header")) return j["_header"];
        break;
    }
    return ordered_json::object();
}

int cmd_validate(const Options& o, std::ostream& out) {
    Context ctx(o, "validate");
    ctx.set_hub_flag(o.hub);
    const Hub hub = ctx.hub();
    const auto db = load_database(ctx.path("db", o.db), hub);
    const auto out_dir = ctx.out_dir(o.out);
    ctx.seed(o.seed);
    ordered_json body = {{"hub", std::string(to_string(hub))},
                         {"records", db.size()},
                         {"warnings", db.warnings()}};
    write_file(out_dir / "validate.json", with_header(ctx.header(), body).dump(2) + "\n");
    out << "valid: " << db.size() << " records (" << to_string(hub) << ")\n";
    for (const auto& w : db.warnings()) out << "warning: " << w << '\n';
    return kOk;
}

int cmd_split(const Options& o, std::ostream& out) {
    Context ctx(o, "split");
    ctx.set_hub_flag(o.hub);
    const Hub hub = ctx.hub();
    const auto ids = load_id_list(ctx.path("ids", o.ids));
    const auto seed = ctx.seed(o.seed);
    const auto split = split_dataset(ids, hub, seed);
    const auto out_dir = ctx.out_dir(o.out);
    const auto header = ctx.header();
    write_file(out_dir / "train_ids.txt", id_file(header, split.train));
    write_file(out_dir / "test_ids.txt", id_file(header, split.test));
    out << "train " << split.train.size() << ", test " << split.test.size() << '\n';
    return kOk;
}

int cmd_index_build(const Options& o, std::ostream& out) {
    Context ctx(o, "index build");
    ctx.set_hub_flag(o.hub);
    const auto db = load_database(ctx.path("db", o.db), ctx.hub());
    const Bm25Params params{ctx.value_or("k1", o.k1, 1.2), ctx.value_or("b", o.b, 0.75)};
    const auto index = build_bm25(db, params);
    ctx.seed(o.seed);
    const auto name = ctx.value_or<std::string>("name", o.name, "bm25_index");
    write_file(ctx.out_dir(o.out) / (name + ".json"),
               with_header(ctx.header(), index.to_json()).dump() + "\n");
    out << "indexed " << index.doc_count() << " documents, " << index.all_postings().size()
        << " terms\n";
    return kOk;
}

int cmd_retrieve(const Options& o, std::ostream& out) {
    Context ctx(o, "retrieve");
    ctx.set_hub_flag(o.hub);
    const auto db = load_database(ctx.path("db", o.db), ctx.hub());
    const auto mode = ctx.value_or<std::string>("mode", o.mode, "bm25");
    const auto k = ctx.value_or<std::size_t>("k", o.k, 1);
    if (k == 0) throw UsageError("-k must be at least 1");
    ordered_json j = ordered_json::object();
    j["mode"] = mode;
    RetrievalResult r;
    if (mode == "oracle") {
        const auto id = ctx.require("example_id", o.example_id);
        const auto examples = load_examples(ctx.path("examples", o.examples));
        const auto it = std::find_if(examples.begin(), examples.end(),
                                     [&](const EvalExample& e) { return e.id == id; });
        if (it == examples.end()) throw Error("unknown example '" + id + "'");
        j["example_id"] = id;
        r = oracle_retrieve(*it, db);
    } else if (mode == "bm25") {
        const auto query = ctx.require("query", o.query);
        j["query"] = query;
        r = bm25_retrieve(resolve_index(ctx, o, db), query, k);
    } else if (mode == "embed") {
        const auto query = ctx.require("query", o.query);
        j["query"] = query;
        r = embed_retrieve(db, *resolve_embedder(ctx, o), query, k);
    } else {
        throw UsageError("--mode must be bm25, embed or oracle");
    }
    j["k"] = k;
    j["results"] = results_json(r);
    out << j.dump(2) << '\n';
    return kOk;
}

int cmd_prompt(const Options& o, std::ostream& out) {
    Context ctx(o, "prompt");
    const auto query = ctx.require("query", o.query);
    PromptMode mode = ZeroShot{};
    if (const auto doc = ctx.value("with_doc", o.with_doc)) {
        ctx.set_hub_flag(o.hub);
        const auto db = load_database(ctx.path("db", o.db), ctx.hub());
        const ApiRecord* r = db.find(*doc);
        if (r == nullptr) throw Error("unknown api id '" + *doc + "'");
        mode = WithRetrieval{*r};
    }
    out << build_prompt(query, mode);
    return kOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
    Context ctx(o, "generate");
    ctx.set_hub_flag(o.hub);
    apply_jobs(ctx, o);
    const Hub hub = ctx.hub();
    const auto db = load_database(ctx.path("db", o.db), hub);
    const auto examples = select_examples(ctx, o, hub);
    const auto backend = resolve_backend(ctx, o, {"replay", "remote", "copy-doc", "echo"});
    const auto mode = ctx.value_or<std::string>("retriever", o.retriever, "none");

    std::optional<Bm25Index> index;
    std::unique_ptr<EmbeddingProvider> embedder;
    std::unique_ptr<Retriever> retriever;
    if (mode == "bm25") {
        index = resolve_index(ctx, o, db);
        retriever = std::make_unique<Bm25Retriever>(*index);
    } else if (mode == "embed") {
        embedder = resolve_embedder(ctx, o);
        retriever = std::make_unique<EmbeddingRetriever>(db, *embedder);
    } else if (mode == "oracle") {
        retriever = std::make_unique<OracleRetriever>(db);
    } else if (mode != "none") {
        throw UsageError("--retriever must be none, bm25, embed or oracle");
    }

    GenerateOptions options;
    options.model_name = ctx.value_or<std::string>("model_name", o.model_name, "");
    options.parallelism = job_count(o);
    ctx.seed(o.seed);
    const auto set = generate_candidates(examples, retriever.get(), db, *backend, options);

    auto header = ctx.header();
    header["retriever"] = mode;
    const auto name = ctx.value_or<std::string>("name", o.name, "candidates");
    write_file(ctx.out_dir(o.out) / (name + ".jsonl"), candidates_to_jsonl(set, header));
    const auto failed = std::count_if(set.by_id.begin(), set.by_id.end(),
                                      [](const auto& kv) { return !kv.second.ok; });
    out << "generated " << set.by_id.size() << " candidates (" << failed << " failed)\n";
    return kOk;
}

EvalSetting resolve_setting(Context& ctx, const Options& o, const fs::path& candidates_path,
                            const CandidateSet& candidates) {
    const auto h = candidates_header(candidates_path);
    EvalSetting s;
    s.model = ctx.value_or<std::string>("model_label", o.model_label, candidates.provenance.label);
    s.retriever = ctx.value_or<std::string>("retriever_label", o.retriever_label,
                                            h.value("retriever", std::string("none")));
    return s;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    Context ctx(o, "evaluate");
    ctx.set_hub_flag(o.hub);
    apply_jobs(ctx, o);
    const Hub hub = ctx.hub();
    const auto db = load_database(ctx.path("db", o.db), hub);
    const auto examples = select_examples(ctx, o, hub);
    const auto cand_path = ctx.path("candidates", o.candidates);
    const auto candidates = load_candidates(cand_path);
    const auto setting = resolve_setting(ctx, o, cand_path, candidates);
    const bool domain_only = o.domain_only || ctx.value<bool>("domain_only", std::nullopt).value_or(false);
    ctx.note("domain_only", domain_only);
    ctx.seed(o.seed);

    const EvalReport report = domain_only
                                  ? evaluate_domain_only(examples, candidates, db, setting)
                                  : evaluate(examples, candidates, db, resolve_spec(ctx, o, db), setting);
    const auto name = ctx.value_or<std::string>("name", o.name, "report");
    write_file(ctx.out_dir(o.out) / (name + ".json"), report_to_json(report, ctx.header()).dump(2) + "\n");
    out << "overall " << fixed2(report.overall_pct()) << "  hallucination "
        << fixed2(report.hallucination_pct()) << "  error " << fixed2(report.error_pct())
        << "  (n=" << report.counts.total() << ")\n";
    return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
    Context ctx(o, "compare");
    if (o.reports.empty()) throw UsageError("compare needs at least one report");
    std::vector<EvalReport> reports;
    for (std::size_t i = 0; i < o.reports.size(); ++i) {
        const fs::path p(o.reports[i]);
        if (!fs::is_regular_file(p)) throw UsageError("report not found: " + p.string());
        ctx.note("report_" + std::to_string(i), {{"fnv1a64", hex64(fnv1a64(read_file(p)))}});
        reports.push_back(load_report(p));
    }
    ctx.seed(o.seed);
    const auto table = compare_settings(reports);
    const auto name = ctx.value_or<std::string>("name", o.name, "comparison");
    write_file(ctx.out_dir(o.out) / (name + ".json"), with_header(ctx.header(), table.to_json()).dump(2) + "\n");
    out << table.to_text();
    return kOk;
}

int cmd_constraint_eval(const Options& o, std::ostream& out) {
    Context ctx(o, "constraint-eval");
    ctx.set_hub_flag(o.hub);
    apply_jobs(ctx, o);
    const Hub hub = ctx.hub();
    const auto db = load_database(ctx.path("db", o.db), hub);
    const auto examples = select_examples(ctx, o, hub);
    const auto cand_path = ctx.path("candidates", o.candidates);
    const auto candidates = load_candidates(cand_path);
    const auto constraints = load_constraints(ctx.path("constraints", o.constraints));
    const auto setting = resolve_setting(ctx, o, cand_path, candidates);
    const auto spec = resolve_spec(ctx, o, db);
    ctx.seed(o.seed);
    const auto report = constraint_evaluate(examples, constraints, candidates, db, spec, setting);
    const auto name = ctx.value_or<std::string>("name", o.name, "constraint_report");
    write_file(ctx.out_dir(o.out) / (name + ".json"),
               constraint_report_to_json(report, ctx.header()).dump(2) + "\n");
    out << "overall " << fixed2(report.overall.overall_pct()) << "  constraint "
        << fixed2(report.constraint_pct()) << "  (n=" << report.overall.counts.total() << ")\n";
    return kOk;
}

int cmd_gen_instructions(const Options& o, std::ostream& out) {
    Context ctx(o, "gen-instructions");
    ctx.set_hub_flag(o.hub);
    const Hub hub = ctx.hub();
    const auto db = load_database(ctx.path("db", o.db), hub);
    const auto pool = load_seed_pool(ctx.path("pool", o.pool), hub);
    if (pool.size() != 6) {
        throw Error("seed pool holds " + std::to_string(pool.size()) + " pairs for " +
                    std::string(to_string(hub)) + "; exactly 6 are needed");
    }
    const auto backend = resolve_backend(ctx, o, {"replay", "remote"});
    const auto n = ctx.value_or<std::size_t>("n", o.n, 10);
    if (n == 0) throw UsageError("-n must be at least 1");
    const auto seed = ctx.seed(o.seed);
    const auto batches = generate_dataset(db, pool, *backend, seed, n, job_count(o));

    std::vector<InstructionPair> pairs;
    ordered_json failures = ordered_json::array();
    std::size_t flagged = 0;
    for (const auto& b : batches) {
        for (const auto& p : b.pairs) {
            if (p.has_flag("api_name_leak")) ++flagged;
            pairs.push_back(p);
        }
        if (!b.complete()) failures.push_back({{"reference_id", b.reference_id}, {"failure", b.failure}});
    }
    auto header = ctx.header();
    header["failures"] = failures;
    const auto name = ctx.value_or<std::string>("name", o.name, "instructions");
    write_file(ctx.out_dir(o.out) / (name + ".jsonl"), pairs_to_jsonl(pairs, header));
    out << "generated " << pairs.size() << " pairs for " << batches.size() << " records ("
        << flagged << " still leaking, " << failures.size() << " incomplete)\n";
    return kOk;
}

int cmd_parse(const Options& o, std::ostream& out) {
    Context ctx(o, "parse");
    const auto text = ctx.require("text", o.text);
    ordered_json calls = ordered_json::array();
    for (const auto& c : parse_calls(text)) {
        calls.push_back({{"callee", c.callee_path()}, {"source", to_source(c)}});
    }
    ordered_json j = {{"calls", calls}};
    if (const auto s = parse_structured_output(text)) {
        ordered_json so = ordered_json::object();
        if (s->domain) so["domain"] = *s->domain;
        if (s->api_call) so["api_call"] = *s->api_call;
        if (s->api_provider) so["api_provider"] = *s->api_provider;
        if (s->explanation) so["explanation"] = *s->explanation;
        if (s->code) so["code"] = *s->code;
        j["structured"] = so;
    }
    out << j.dump(2) << '\n';
    return kOk;
}

void error_record(std::ostream& err, std::string_view kind, std::string_view command,
                  std::string_view message) {
    ordered_json j = {{"error", {{"kind", kind}, {"command", command}, {"message", message}}}};
    err << j.dump() << '\n';
}

const CLI::App* deepest_subcommand(const CLI::App& app) {
    const CLI::App* cur = &app;
    for (;;) {
        const auto subs = cur->get_subcommands();
        if (subs.empty()) return cur;
        cur = subs.front();
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Evaluate LLM-generated model-hub API calls", "hubeval"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON run config; flags override its keys");
        sub->add_option("--out", o.out, "Output directory (default: out)");
        sub->add_option("--seed", o.seed, "Seed recorded in artifact headers");
        sub->add_option("--jobs", o.jobs, "Cap on worker threads");
        sub->add_option("--hub", o.hub, "torchhub, tensorhub or huggingface");
    };
    auto eval_inputs = [&](CLI::App* sub) {
        sub->add_option("--db", o.db, "API database (JSON Lines)");
        sub->add_option("--examples", o.examples, "Evaluation examples (JSON Lines)");
        sub->add_option("--ids", o.ids, "Restrict to the example ids in this file");
        sub->add_option("--candidates", o.candidates, "Candidate outputs (JSON Lines)");
        sub->add_option("--match-spec", o.match_spec, "Match spec JSON (default: built-in for the hub)");
        sub->add_option("--model-label", o.model_label, "Model column in reports");
        sub->add_option("--retriever-label", o.retriever_label, "Retriever column in reports");
        sub->add_option("--name", o.name, "Report file stem");
    };

    auto* validate = app.add_subcommand("validate", "Load and check an API database");
    common(validate);
    validate->add_option("db,--db", o.db, "API database (JSON Lines)");

    auto* split = app.add_subcommand("split", "Seeded train/test split of example ids");
    common(split);
    split->add_option("ids,--ids", o.ids, "Id list or examples file");

    auto* index = app.add_subcommand("index", "Retrieval index commands");
    index->require_subcommand(1);
    auto* index_build = index->add_subcommand("build", "Build and save a BM25 index");
    common(index_build);
    index_build->add_option("--db", o.db, "API database (JSON Lines)");
    index_build->add_option("--k1", o.k1, "BM25 k1 (default 1.2)");
    index_build->add_option("--b", o.b, "BM25 b (default 0.75)");
    index_build->add_option("--name", o.name, "Index file stem");

    auto* retrieve = app.add_subcommand("retrieve", "Print the top-k documents for a query");
    common(retrieve);
    retrieve->add_option("--db", o.db, "API database (JSON Lines)");
    retrieve->add_option("--mode", o.mode, "bm25, embed or oracle");
    retrieve->add_option("--query", o.query, "Query text");
    retrieve->add_option("-k", o.k, "Number of documents (default 1)");
    retrieve->add_option("--index", o.index, "Saved BM25 index");
    retrieve->add_option("--k1", o.k1, "BM25 k1 when building in memory");
    retrieve->add_option("--b", o.b, "BM25 b when building in memory");
    retrieve->add_option("--embedding-config", o.embedding_config, "Remote embedding config JSON");
    retrieve->add_option("--dimension", o.dimension, "Hashed embedding dimension (default 256)");
    retrieve->add_option("--examples", o.examples, "Examples file (oracle mode)");
    retrieve->add_option("--example-id", o.example_id, "Example to retrieve for (oracle mode)");

    auto* prompt = app.add_subcommand("prompt", "Print the exact prompt sent to a model");
    common(prompt);
    prompt->add_option("--query", o.query, "User instruction");
    prompt->add_option("--with-doc", o.with_doc, "Append this API record as retrieved documentation");
    prompt->add_option("--db", o.db, "API database holding --with-doc");

    auto* generate = app.add_subcommand("generate", "Produce candidate outputs for examples");
    common(generate);
    generate->add_option("--db", o.db, "API database (JSON Lines)");
    generate->add_option("--examples", o.examples, "Evaluation examples (JSON Lines)");
    generate->add_option("--ids", o.ids, "Restrict to the example ids in this file");
    generate->add_option("--backend", o.backend, "replay, remote, copy-doc or echo");
    generate->add_option("--replay", o.replay, "Replay file (replay backend)");
    generate->add_option("--remote-config", o.remote_config, "Remote model config JSON");
    generate->add_option("--model-name", o.model_name, "Model name sent with each request");
    generate->add_option("--retriever", o.retriever, "none, bm25, embed or oracle");
    generate->add_option("--index", o.index, "Saved BM25 index");
    generate->add_option("--k1", o.k1, "BM25 k1 when building in memory");
    generate->add_option("--b", o.b, "BM25 b when building in memory");
    generate->add_option("--embedding-config", o.embedding_config, "Remote embedding config JSON");
    generate->add_option("--dimension", o.dimension, "Hashed embedding dimension (default 256)");
    generate->add_option("--name", o.name, "Candidates file stem");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Classify candidates and write a report");
    common(evaluate_cmd);
    eval_inputs(evaluate_cmd);
    evaluate_cmd->add_flag("--domain-only", o.domain_only, "Score only the predicted domain");

    auto* compare = app.add_subcommand("compare", "Tabulate reports over the same examples");
    common(compare);
    compare->add_option("reports", o.reports, "Report files")->required();
    compare->add_option("--name", o.name, "Comparison file stem");

    auto* constraint = app.add_subcommand("constraint-eval", "Accuracy under metric constraints");
    common(constraint);
    eval_inputs(constraint);
    constraint->add_option("--constraints", o.constraints, "Constraints (JSON Lines)");

    auto* gen_instr = app.add_subcommand("gen-instructions", "Self-instruct instruction generation");
    common(gen_instr);
    gen_instr->add_option("--db", o.db, "API database (JSON Lines)");
    gen_instr->add_option("--pool", o.pool, "Seed pairs (JSON Lines)");
    gen_instr->add_option("--backend", o.backend, "replay or remote");
    gen_instr->add_option("--replay", o.replay, "Replay file (replay backend)");
    gen_instr->add_option("--remote-config", o.remote_config, "Remote model config JSON");
    gen_instr->add_option("-n", o.n, "Instructions per record (default 10)");
    gen_instr->add_option("--name", o.name, "Output file stem");

    auto* parse = app.add_subcommand("parse", "Show the calls extracted from text");
    common(parse);
    parse->add_option("--text", o.text, "Text to parse");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        const CLI::App* target = deepest_subcommand(app);
        err << e.what() << "\n\n" << target->help();
        error_record(err, "usage", target->get_name(), e.what());
        return kUsage;
    }

    const CLI::App* target = deepest_subcommand(app);
    const std::string command = target == index_build ? "index build" : target->get_name();
    try {
        if (*validate) return cmd_validate(o, out);
        if (*split) return cmd_split(o, out);
        if (*index_build) return cmd_index_build(o, out);
        if (*retrieve) return cmd_retrieve(o, out);
        if (*prompt) return cmd_prompt(o, out);
        if (*generate) return cmd_generate(o, out);
        if (*evaluate_cmd) return cmd_evaluate(o, out);
        if (*compare) return cmd_compare(o, out);
        if (*constraint) return cmd_constraint_eval(o, out);
        if (*gen_instr) return cmd_gen_instructions(o, out);
        if (*parse) return cmd_parse(o, out);
    } catch (const UsageError& e) {
        err << e.what() << "\n\n" << target->help();
        error_record(err, "usage", command, e.what());
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        error_record(err, "failure", command, e.what());
        return kFailure;
    }
    return kUsage;
}

}  // namespace hubeval::cli
