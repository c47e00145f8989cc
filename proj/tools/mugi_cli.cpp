// mugi: command-line front end for indexing, reference generation, retrieval,
// evaluation, keyword analysis and parameter sweeps.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mugi/analysis.hpp"
#include "mugi/error.hpp"
#include "mugi/generation.hpp"
#include "mugi/index.hpp"
#include "mugi/metrics.hpp"
#include "mugi/pipeline.hpp"
#include "mugi/reference_cache.hpp"
#include "mugi/trec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kIo = 3,
    kCacheMiss = 4,
    kService = 5,
    kParse = 6,
    kInvalid = 7,
};

bool g_quiet = false;

template <typename... Args>
void log(const char* fmt, Args... args) {
    if (g_quiet) return;
    std::fprintf(stderr, "mugi: ");
    if constexpr (sizeof...(Args) == 0) {
        std::fputs(fmt, stderr);
    } else {
        std::fprintf(stderr, fmt, args...);
    }
    std::fputc('\n', stderr);
}

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw mugi::InvalidArgument(std::string("missing --") + what);
    if (!fs::is_regular_file(path)) throw mugi::IoError(std::string(what) + " not found: " + path);
}

void require_parent(const fs::path& out) {
    const auto parent = out.parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
        throw mugi::IoError("output directory does not exist: " + parent.string());
    }
}

// Options shared by several subcommands. Values land here and are turned into
// library configs after parsing.
struct Options {
    std::size_t jobs = 4;

    std::string corpus, index, queries, cache, qrels, run, out, out_dir;
    std::string field_policy = "title_plus_text";

    // Chat service.
    std::string endpoint, api_key_env;
    std::string model;
    std::size_t n = 5;
    double temperature = 1.0;
    std::size_t max_tokens = 256;
    std::size_t timeout_ms = 60'000;
    std::size_t max_retries = 3;

    // Retrieval.
    double beta = 4.0;
    std::optional<std::size_t> t;
    double k1 = 0.9, b = 0.4;
    std::size_t retrieve_k = 100, eval_k = 10;
    std::string gain = "linear";

    // Dense stage.
    std::string strategy = "contex_pool";
    double alpha = 0.2;
    std::size_t k_reciprocal = 10, num_negatives = 5;
    bool no_calibrate = false;
    std::string embedder = "hashing";
    std::size_t embed_dim = 1024;
    std::uint64_t embed_seed = 0;
    std::size_t embed_max_tokens = 512;
    std::string embed_url, embed_api_key_env, embed_model = "remote";
    std::size_t embed_batch = 32;
    bool embed_unit_norm = false;

    // eval / analyze / sweep.
    std::size_t m = 10;
    std::string axis;
    std::vector<std::string> values;
};

void add_chat_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--endpoint", o.endpoint, "chat-completions URL");
    cmd->add_option("--api-key-env", o.api_key_env, "environment variable holding the chat API key");
    cmd->add_option("--temperature", o.temperature)->capture_default_str();
    cmd->add_option("--max-tokens", o.max_tokens)->capture_default_str();
    cmd->add_option("--timeout-ms", o.timeout_ms)->capture_default_str();
    cmd->add_option("--max-retries", o.max_retries)->capture_default_str();
}

void add_sparse_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--model", o.model, "reference model id (default: latest cached set)");
    cmd->add_option("--n", o.n, "references per query")->capture_default_str();
    auto* beta = cmd->add_option("--beta", o.beta, "adaptive reweighting beta")->capture_default_str();
    cmd->add_option("--t", o.t, "repeat the query t times instead of adaptive reweighting")->excludes(beta);
    cmd->add_option("--k1", o.k1)->capture_default_str();
    cmd->add_option("--b", o.b)->capture_default_str();
    cmd->add_option("--retrieve-k", o.retrieve_k)->capture_default_str();
    cmd->add_option("--eval-k", o.eval_k)->capture_default_str();
    cmd->add_option("--gain", o.gain, "linear or exponential")->capture_default_str();
}

void add_dense_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--strategy", o.strategy, "concat, mean_pool or contex_pool")->capture_default_str();
    cmd->add_option("--alpha", o.alpha)->capture_default_str();
    cmd->add_option("--k-reciprocal", o.k_reciprocal)->capture_default_str();
    cmd->add_option("--num-negatives", o.num_negatives)->capture_default_str();
    cmd->add_flag("--no-calibrate", o.no_calibrate, "stop after the integrated rerank");
    cmd->add_option("--embedder", o.embedder, "hashing, http or none")->capture_default_str();
    cmd->add_option("--embed-dim", o.embed_dim, "hashing dimension, or expected remote dimension")
        ->capture_default_str();
    cmd->add_option("--embed-seed", o.embed_seed)->capture_default_str();
    cmd->add_option("--embed-max-tokens", o.embed_max_tokens)->capture_default_str();
    cmd->add_option("--embed-url", o.embed_url);
    cmd->add_option("--embed-api-key-env", o.embed_api_key_env);
    cmd->add_option("--embed-model", o.embed_model)->capture_default_str();
    cmd->add_option("--embed-batch", o.embed_batch)->capture_default_str();
    cmd->add_flag("--embed-unit-norm", o.embed_unit_norm);
}

mugi::GenerationConfig generation_config(const Options& o) {
    mugi::GenerationConfig g;
    if (!o.model.empty()) g.model_id = o.model;
    g.n = o.n;
    g.temperature = o.temperature;
    g.max_tokens = o.max_tokens;
    g.timeout = std::chrono::milliseconds(o.timeout_ms);
    g.max_retries = o.max_retries;
    return g;
}

mugi::PipelineConfig pipeline_config(const Options& o) {
    mugi::PipelineConfig cfg;
    cfg.bm25 = {o.k1, o.b};
    if (o.t) {
        cfg.reweight.strategy = mugi::ConstantRepetition{*o.t};
    } else {
        cfg.reweight.strategy = mugi::AdaptiveReweight{o.beta};
    }
    cfg.strategy = mugi::parse_strategy(o.strategy);
    cfg.calibration = {o.alpha, o.k_reciprocal, o.num_negatives};
    cfg.calibrate = !o.no_calibrate;
    cfg.num_references = o.n;
    cfg.retrieve_k = o.retrieve_k;
    cfg.eval_k = o.eval_k;
    cfg.gain = mugi::parse_gain(o.gain);
    cfg.model_id = o.model;
    cfg.validate();
    return cfg;
}

std::unique_ptr<mugi::EmbeddingProvider> make_embedder(const Options& o) {
    if (o.embedder == "none") return nullptr;
    if (o.embedder == "hashing") {
        return std::make_unique<mugi::HashingEmbedder>(o.embed_dim, o.embed_seed, o.embed_max_tokens);
    }
    if (o.embedder == "http") {
        if (o.embed_url.empty()) throw mugi::InvalidArgument("--embedder http needs --embed-url");
        mugi::HttpEmbeddingConfig c;
        c.endpoint = {o.embed_url, o.embed_api_key_env};
        c.model_name = o.embed_model;
        c.dimension = o.embed_dim;
        c.max_input_tokens = o.embed_max_tokens;
        c.batch_size = o.embed_batch;
        c.unit_norm = o.embed_unit_norm;
        c.timeout = std::chrono::milliseconds(o.timeout_ms);
        c.max_retries = o.max_retries;
        return std::make_unique<mugi::HttpEmbeddingProvider>(c);
    }
    throw mugi::InvalidArgument("unknown embedder: " + o.embedder);
}

std::unique_ptr<mugi::ChatService> make_chat(const Options& o) {
    if (o.endpoint.empty()) return nullptr;
    return std::make_unique<mugi::OpenAIChatService>(mugi::ServiceEndpoint{o.endpoint, o.api_key_env});
}

json embedder_json(const Options& o) {
    json j{{"kind", o.embedder}, {"max_input_tokens", o.embed_max_tokens}};
    if (o.embedder == "hashing") {
        j["dimension"] = o.embed_dim;
        j["seed"] = o.embed_seed;
    } else if (o.embedder == "http") {
        j["url"] = o.embed_url;
        j["model"] = o.embed_model;
        j["dimension"] = o.embed_dim;
        j["batch_size"] = o.embed_batch;
        j["api_key_env"] = o.embed_api_key_env;
    }
    return j;
}

// Record of one command invocation, written as <output>.manifest.json.
class RunManifest {
public:
    explicit RunManifest(std::string command) : started_(mugi::utc_timestamp()) {
        doc_["command"] = std::move(command);
        doc_["versions"] = {{"code", kVersion}, {"prompt_template", std::string(mugi::kPromptVersion)}};
        doc_["inputs"] = json::object();
        doc_["outputs"] = json::array();
    }

    void config(json c) { doc_["config"] = std::move(c); }
    void input(const std::string& name, const std::string& path) {
        if (!path.empty()) doc_["inputs"][name] = fs::absolute(path).string();
    }
    void output(const fs::path& path) { doc_["outputs"].push_back(fs::absolute(path).string()); }

    void write(const fs::path& path) {
        doc_["started_at"] = started_;
        doc_["finished_at"] = mugi::utc_timestamp();
        std::ofstream out(path);
        if (!out) throw mugi::IoError("cannot write " + path.string());
        out << doc_.dump(2) << '\n';
        if (!out) throw mugi::IoError("cannot write " + path.string());
    }

private:
    json doc_;
    std::string started_;
};

fs::path manifest_path(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

mugi::IndexedCorpus open_corpus(const Options& o) {
    if (!o.index.empty()) {
        require_file(o.index, "index");
        return mugi::load_index(o.index);
    }
    require_file(o.corpus, "corpus");
    log("indexing %s", o.corpus.c_str());
    return mugi::IndexedCorpus::build(mugi::load_corpus_jsonl(o.corpus), mugi::parse_field_policy(o.field_policy));
}

void require_corpus_source(const Options& o) {
    if (!o.index.empty()) {
        require_file(o.index, "index");
    } else {
        require_file(o.corpus, "corpus");
    }
}

// ---- commands ---------------------------------------------------------------

int cmd_index(const Options& o) {
    require_file(o.corpus, "corpus");
    if (o.index.empty()) throw mugi::InvalidArgument("missing --index");
    const auto policy = mugi::parse_field_policy(o.field_policy);
    require_parent(o.index);

    auto corpus = mugi::IndexedCorpus::build(mugi::load_corpus_jsonl(o.corpus), policy);
    mugi::save_index(o.index, corpus);
    log("indexed %zu documents, %zu terms", corpus.index.num_docs(), corpus.index.num_terms());

    RunManifest manifest("index");
    manifest.config({{"field_policy", mugi::to_string(policy)}});
    manifest.input("corpus", o.corpus);
    manifest.output(o.index);
    manifest.write(manifest_path(o.index));
    return kOk;
}

int cmd_generate(const Options& o) {
    require_file(o.queries, "queries");
    if (o.cache.empty()) throw mugi::InvalidArgument("missing --cache");
    if (o.endpoint.empty()) throw mugi::InvalidArgument("missing --endpoint");
    if (o.n < 1) throw mugi::InvalidArgument("--n must be >= 1");
    require_parent(o.cache);
    const auto gen = generation_config(o);
    const auto queries = mugi::read_queries(o.queries);
    mugi::ReferenceCache cache{fs::path(o.cache)};
    auto chat = make_chat(o);

    std::vector<const mugi::Query*> todo;
    for (const auto& q : queries) {
        const auto hit = cache.get(q.query_id, gen.model_id);
        if (!hit || hit->references.size() < gen.n) todo.push_back(&q);
    }
    log("%zu of %zu queries need references", todo.size(), queries.size());

    std::atomic<std::size_t> next{0};
    std::mutex failures_mutex;
    std::vector<std::string> failures;
    {
        std::vector<std::jthread> workers;
        const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, todo.size()));
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < todo.size(); i = next++) {
                    const auto& q = *todo[i];
                    try {
                        mugi::generate_references(*chat, q.query_id, q.text, gen, &cache);
                    } catch (const std::exception& e) {
                        std::lock_guard lock(failures_mutex);
                        failures.push_back(q.query_id);
                        log("query %s: %s", q.query_id.c_str(), e.what());
                    }
                }
            });
        }
    }

    RunManifest manifest("generate");
    manifest.config(json{{"endpoint", o.endpoint},
                         {"api_key_env", o.api_key_env},
                         {"model", gen.model_id},
                         {"n", gen.n},
                         {"temperature", gen.temperature},
                         {"max_tokens", gen.max_tokens},
                         {"failed_queries", failures}});
    manifest.input("queries", o.queries);
    manifest.output(o.cache);
    manifest.write(manifest_path(o.cache));

    if (!failures.empty()) {
        throw mugi::ServiceError(std::to_string(failures.size()) + " queries failed, first: " + failures.front());
    }
    return kOk;
}

int cmd_search(const Options& o) {
    require_file(o.index, "index");
    require_file(o.queries, "queries");
    if (o.cache.empty() && o.endpoint.empty()) throw mugi::InvalidArgument("missing --cache");
    if (o.out.empty()) throw mugi::InvalidArgument("missing --out");
    require_parent(o.out);
    const auto cfg = pipeline_config(o);

    const auto corpus = mugi::load_index(o.index);
    const auto queries = mugi::read_queries(o.queries);
    std::optional<mugi::ReferenceCache> cache;
    if (o.cache.empty()) {
        cache.emplace();
    } else {
        cache.emplace(fs::path(o.cache));
    }
    auto chat = make_chat(o);
    mugi::ReferenceSource source(*cache, chat.get(), generation_config(o));

    const auto runs = mugi::run_queries(queries, source, corpus, nullptr, cfg, o.jobs);
    mugi::write_run(o.out, runs.bm25);
    log("wrote %zu rankings to %s", runs.bm25.size(), o.out.c_str());

    RunManifest manifest("search");
    manifest.config({{"pipeline", mugi::to_json(cfg)}, {"fingerprint", mugi::fingerprint(cfg)}});
    manifest.input("index", o.index);
    manifest.input("queries", o.queries);
    manifest.input("cache", o.cache);
    manifest.output(o.out);
    manifest.write(manifest_path(o.out));
    return kOk;
}

void print_report(const char* label, const mugi::EvalReport& r) {
    std::printf("%s\tndcg@%zu\t%.6f\t(%zu evaluated, %zu skipped)\n", label, r.k, r.mean, r.evaluated,
                r.skipped.size());
}

int cmd_pipeline(const Options& o) {
    require_corpus_source(o);
    require_file(o.queries, "queries");
    if (!o.qrels.empty()) require_file(o.qrels, "qrels");
    if (o.cache.empty() && o.endpoint.empty()) throw mugi::InvalidArgument("missing --cache");
    if (o.out_dir.empty()) throw mugi::InvalidArgument("missing --out-dir");
    if (!fs::is_directory(o.out_dir)) throw mugi::IoError("output directory does not exist: " + o.out_dir);
    const auto cfg = pipeline_config(o);
    auto embedder = make_embedder(o);
    if (!embedder) throw mugi::InvalidArgument("pipeline needs an embedder; use search for the sparse stage");

    const auto corpus = open_corpus(o);
    const auto queries = mugi::read_queries(o.queries);
    std::optional<mugi::ReferenceCache> cache;
    if (o.cache.empty()) {
        cache.emplace();
    } else {
        cache.emplace(fs::path(o.cache));
    }
    auto chat = make_chat(o);
    mugi::ReferenceSource source(*cache, chat.get(), generation_config(o));

    const auto runs = mugi::run_queries(queries, source, corpus, embedder.get(), cfg, o.jobs);
    const fs::path dir(o.out_dir);
    RunManifest manifest("pipeline");
    manifest.config({{"pipeline", mugi::to_json(cfg)},
                     {"fingerprint", mugi::fingerprint(cfg)},
                     {"embedder", embedder_json(o)}});
    manifest.input("index", o.index);
    manifest.input("corpus", o.corpus);
    manifest.input("queries", o.queries);
    manifest.input("cache", o.cache);
    manifest.input("qrels", o.qrels);
    const std::pair<const char*, const std::vector<mugi::Ranking>*> outputs[] = {
        {"bm25", &runs.bm25}, {"pre", &runs.pre}, {"post", &runs.post}};
    for (const auto& [name, run] : outputs) {
        const auto path = dir / (std::string(name) + ".run");
        mugi::write_run(path, *run, std::string("mugi-") + name);
        manifest.output(path);
    }
    manifest.write(dir / "manifest.json");
    log("wrote runs for %zu queries to %s", queries.size(), o.out_dir.c_str());

    if (!o.qrels.empty()) {
        const auto qrels = mugi::read_qrels(o.qrels);
        const auto fp = mugi::fingerprint(cfg);
        for (const auto& [name, run] : outputs) print_report(name, mugi::evaluate_run(*run, qrels, cfg.eval_k, cfg.gain, fp));
    }
    return kOk;
}

int cmd_eval(const Options& o) {
    require_file(o.run, "run");
    require_file(o.qrels, "qrels");
    if (o.eval_k < 1) throw mugi::InvalidArgument("--k must be >= 1");
    const auto run = mugi::read_run(o.run);
    const auto qrels = mugi::read_qrels(o.qrels);
    const auto report = mugi::evaluate_run(run, qrels, o.eval_k, mugi::parse_gain(o.gain));
    for (const auto& [qid, score] : report.per_query) std::printf("%s\t%.6f\n", qid.c_str(), score);
    std::printf("mean\t%.6f\n", report.mean);
    if (!report.skipped.empty()) log("%zu queries without positive judgments skipped", report.skipped.size());
    if (!o.out.empty()) {
        require_parent(o.out);
        std::ofstream out(o.out);
        out << mugi::to_json(report).dump(2) << '\n';
        if (!out) throw mugi::IoError("cannot write " + o.out);
        RunManifest manifest("eval");
        manifest.config({{"k", o.eval_k}, {"gain", o.gain}});
        manifest.input("run", o.run);
        manifest.input("qrels", o.qrels);
        manifest.output(o.out);
        manifest.write(manifest_path(o.out));
    }
    return kOk;
}

int cmd_analyze(const Options& o) {
    require_corpus_source(o);
    require_file(o.queries, "queries");
    require_file(o.cache, "cache");
    require_file(o.qrels, "qrels");
    if (o.m < 1) throw mugi::InvalidArgument("--m must be >= 1");
    const auto corpus = open_corpus(o);
    const auto queries = mugi::read_queries(o.queries);
    const auto qrels = mugi::read_qrels(o.qrels);
    mugi::ReferenceCache cache{fs::path(o.cache)};

    json rows = json::array();
    double sum_pse = 0, sum_query = 0;
    std::size_t counted = 0;
    std::printf("query_id\tgt_pse\tgt_query\n");
    for (const auto& q : queries) {
        const auto judged = qrels.find(q.query_id);
        if (judged == qrels.end()) continue;
        std::vector<mugi::Document> gt;
        for (const auto& [doc, grade] : judged->second) {
            if (grade <= 0) continue;
            if (const auto* d = corpus.store.find(doc)) gt.push_back(*d);
        }
        if (gt.empty()) continue;
        const auto refs = o.model.empty() ? cache.latest(q.query_id) : cache.get(q.query_id, o.model);
        if (!refs) throw mugi::CacheMiss(q.query_id);
        const auto used = mugi::first_references(*refs, o.n);
        const auto overlap = mugi::keyword_overlap(q.text, used, gt, corpus.index, o.m, corpus.index.field_policy());
        std::printf("%s\t%zu\t%zu\n", q.query_id.c_str(), overlap.gt_pse, overlap.gt_query);
        rows.push_back({{"query_id", q.query_id},
                        {"gt_top", overlap.gt_top},
                        {"pse_top", overlap.pse_top},
                        {"gt_pse", overlap.gt_pse},
                        {"gt_query", overlap.gt_query}});
        sum_pse += static_cast<double>(overlap.gt_pse);
        sum_query += static_cast<double>(overlap.gt_query);
        ++counted;
    }
    const double mean_pse = counted ? sum_pse / static_cast<double>(counted) : 0.0;
    const double mean_query = counted ? sum_query / static_cast<double>(counted) : 0.0;
    std::printf("mean\t%.6f\t%.6f\n", mean_pse, mean_query);

    if (!o.out.empty()) {
        require_parent(o.out);
        std::ofstream out(o.out);
        out << json{{"m", o.m}, {"mean_gt_pse", mean_pse}, {"mean_gt_query", mean_query}, {"queries", rows}}.dump(2)
            << '\n';
        if (!out) throw mugi::IoError("cannot write " + o.out);
        RunManifest manifest("analyze");
        manifest.config({{"m", o.m}, {"n", o.n}, {"model", o.model}});
        manifest.input("index", o.index);
        manifest.input("corpus", o.corpus);
        manifest.input("queries", o.queries);
        manifest.input("cache", o.cache);
        manifest.input("qrels", o.qrels);
        manifest.output(o.out);
        manifest.write(manifest_path(o.out));
    }
    return kOk;
}

int cmd_sweep(const Options& o) {
    const auto axis = mugi::parse_sweep_axis(o.axis);
    if (o.values.empty()) throw mugi::InvalidArgument("missing --values");
    require_corpus_source(o);
    require_file(o.queries, "queries");
    require_file(o.qrels, "qrels");
    if (o.cache.empty() && o.endpoint.empty()) throw mugi::InvalidArgument("missing --cache");
    const auto base = pipeline_config(o);
    for (const auto& v : o.values) mugi::apply_sweep_value(base, axis, v).validate();
    auto embedder = make_embedder(o);

    const auto corpus = open_corpus(o);
    const auto queries = mugi::read_queries(o.queries);
    const auto qrels = mugi::read_qrels(o.qrels);
    std::optional<mugi::ReferenceCache> cache;
    if (o.cache.empty()) {
        cache.emplace();
    } else {
        cache.emplace(fs::path(o.cache));
    }
    auto chat = make_chat(o);
    mugi::ReferenceSource source(*cache, chat.get(), generation_config(o));

    const auto rows = mugi::sweep(axis, o.values, base, queries, qrels, source, corpus, embedder.get(), o.jobs);
    std::fputs(mugi::format_sweep_table(axis, rows).c_str(), stdout);

    if (!o.out.empty()) {
        require_parent(o.out);
        json doc{{"axis", mugi::to_string(axis)}, {"rows", json::array()}};
        for (const auto& row : rows) doc["rows"].push_back(mugi::to_json(axis, row));
        std::ofstream out(o.out);
        out << doc.dump(2) << '\n';
        if (!out) throw mugi::IoError("cannot write " + o.out);
        RunManifest manifest("sweep");
        manifest.config({{"axis", mugi::to_string(axis)},
                         {"values", o.values},
                         {"base", mugi::to_json(base)},
                         {"embedder", embedder_json(o)}});
        manifest.input("index", o.index);
        manifest.input("corpus", o.corpus);
        manifest.input("queries", o.queries);
        manifest.input("cache", o.cache);
        manifest.input("qrels", o.qrels);
        manifest.output(o.out);
        manifest.write(manifest_path(o.out));
    }
    return kOk;
}

int report(int code, const char* kind, const std::exception& e) {
    std::fprintf(stderr, "mugi: %s: %s\n", kind, e.what());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MuGI query expansion: sparse retrieval, dense rerank and evaluation"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
    app.add_flag("--quiet", g_quiet, "suppress progress messages");

    auto* index = app.add_subcommand("index", "build an index artifact from a JSONL corpus");
    index->add_option("--corpus", o.corpus, "JSONL corpus")->required();
    index->add_option("--index", o.index, "output index file")->required();
    index->add_option("--field-policy", o.field_policy, "text_only or title_plus_text")->capture_default_str();

    auto* generate = app.add_subcommand("generate", "generate pseudo-references into the cache");
    generate->add_option("--queries", o.queries, "queries TSV")->required();
    generate->add_option("--cache", o.cache, "reference cache JSONL (appended)")->required();
    generate->add_option("--model", o.model, "chat model id");
    generate->add_option("--n", o.n, "references per query")->capture_default_str();
    add_chat_options(generate, o);

    auto* search = app.add_subcommand("search", "expanded BM25 retrieval");
    search->add_option("--index", o.index)->required();
    search->add_option("--queries", o.queries)->required();
    search->add_option("--cache", o.cache);
    search->add_option("--out", o.out, "output run file")->required();
    add_sparse_options(search, o);
    add_chat_options(search, o);

    auto* pipeline = app.add_subcommand("pipeline", "expanded BM25, integrated rerank and calibration");
    pipeline->add_option("--index", o.index);
    pipeline->add_option("--corpus", o.corpus, "JSONL corpus, used when no --index is given");
    pipeline->add_option("--field-policy", o.field_policy)->capture_default_str();
    pipeline->add_option("--queries", o.queries)->required();
    pipeline->add_option("--cache", o.cache);
    pipeline->add_option("--qrels", o.qrels, "print nDCG of each stage");
    pipeline->add_option("--out-dir", o.out_dir, "directory for bm25.run, pre.run, post.run")->required();
    add_sparse_options(pipeline, o);
    add_dense_options(pipeline, o);
    add_chat_options(pipeline, o);

    auto* eval = app.add_subcommand("eval", "nDCG@k of a run");
    eval->add_option("--run", o.run)->required();
    eval->add_option("--qrels", o.qrels)->required();
    eval->add_option("--k", o.eval_k)->capture_default_str();
    eval->add_option("--gain", o.gain)->capture_default_str();
    eval->add_option("--out", o.out, "write the report as JSON");

    auto* analyze = app.add_subcommand("analyze", "keyword overlap of references and relevant passages");
    analyze->add_option("--index", o.index);
    analyze->add_option("--corpus", o.corpus);
    analyze->add_option("--field-policy", o.field_policy)->capture_default_str();
    analyze->add_option("--queries", o.queries)->required();
    analyze->add_option("--cache", o.cache)->required();
    analyze->add_option("--qrels", o.qrels)->required();
    analyze->add_option("--model", o.model);
    analyze->add_option("--n", o.n)->capture_default_str();
    analyze->add_option("--m", o.m, "top idf terms compared")->capture_default_str();
    analyze->add_option("--out", o.out, "write per-query overlaps as JSON");

    auto* sweep = app.add_subcommand("sweep", "evaluate a grid over one parameter");
    sweep->add_option("--axis", o.axis, "beta, t, alpha, n_refs or strategy")->required();
    sweep->add_option("--values", o.values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--index", o.index);
    sweep->add_option("--corpus", o.corpus);
    sweep->add_option("--field-policy", o.field_policy)->capture_default_str();
    sweep->add_option("--queries", o.queries)->required();
    sweep->add_option("--cache", o.cache);
    sweep->add_option("--qrels", o.qrels)->required();
    sweep->add_option("--out", o.out, "write rows as JSON");
    add_sparse_options(sweep, o);
    add_dense_options(sweep, o);
    add_chat_options(sweep, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*index) return cmd_index(o);
        if (*generate) return cmd_generate(o);
        if (*search) return cmd_search(o);
        if (*pipeline) return cmd_pipeline(o);
        if (*eval) return cmd_eval(o);
        if (*analyze) return cmd_analyze(o);
        if (*sweep) return cmd_sweep(o);
        return kUsage;
    } catch (const mugi::CacheMiss& e) {
        return report(kCacheMiss, "cache miss", e);
    } catch (const mugi::ParseError& e) {
        return report(kParse, "parse error", e);
    } catch (const mugi::IoError& e) {
        return report(kIo, "i/o error", e);
    } catch (const mugi::ServiceError& e) {
        return report(kService, "service error", e);
    } catch (const mugi::InvalidArgument& e) {
        return report(kInvalid, "invalid argument", e);
    } catch (const std::exception& e) {
        return report(kFailure, "error", e);
    }
}
