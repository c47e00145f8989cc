#include "mugi/pipeline.hpp"

#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mugi/fingerprint.hpp"
#include "mugi/rerank.hpp"
#include "parallel.hpp"

namespace mugi {

void PipelineConfig::validate() const {
    bm25.validate();
    reweight.validate();
    calibration.validate();
    if (retrieve_k < 1) throw InvalidArgument("pipeline: retrieve_k must be >= 1");
    if (eval_k < 1) throw InvalidArgument("pipeline: eval_k must be >= 1");
    if (retrieve_k < eval_k) throw InvalidArgument("pipeline: retrieve_k must be >= eval_k");
}

nlohmann::json to_json(const PipelineConfig& config) {
    nlohmann::json reweight;
    if (const auto* a = std::get_if<AdaptiveReweight>(&config.reweight.strategy)) {
        reweight = {{"strategy", "adaptive"}, {"beta", a->beta}};
    } else {
        reweight = {{"strategy", "constant"}, {"t", std::get<ConstantRepetition>(config.reweight.strategy).times}};
    }
    reweight["lambda_min"] = config.reweight.lambda_min;
    return {
        {"bm25", {{"k1", config.bm25.k1}, {"b", config.bm25.b}}},
        {"reweight", reweight},
        {"strategy", to_string(config.strategy)},
        {"calibration",
         {{"enabled", config.calibrate},
          {"alpha", config.calibration.alpha},
          {"k_reciprocal", config.calibration.k_reciprocal},
          {"num_negatives", config.calibration.num_negatives}}},
        {"num_references", config.num_references},
        {"retrieve_k", config.retrieve_k},
        {"eval_k", config.eval_k},
        {"gain", to_string(config.gain)},
        {"model_id", config.model_id},
    };
}

std::string fingerprint(const PipelineConfig& config) {
    // nlohmann::json objects are key-sorted, so dump() is canonical.
    return fingerprint_hex(to_json(config).dump());
}

ReferenceSource::ReferenceSource(ReferenceCache& cache, ChatService* service, GenerationConfig generation)
    : cache_(cache), service_(service), generation_(std::move(generation)) {}

ReferenceSet ReferenceSource::fetch(const std::string& query_id, std::string_view query, const std::string& model_id) {
    auto hit = model_id.empty() ? cache_.latest(query_id) : cache_.get(query_id, model_id);
    if (hit) return *hit;
    if (service_ == nullptr) throw CacheMiss(query_id);
    GenerationConfig gen = generation_;
    if (!model_id.empty()) gen.model_id = model_id;
    return generate_references(*service_, query_id, query, gen, &cache_);
}

namespace {

std::span<const std::string> used_references(const ReferenceSet& refs, const PipelineConfig& config) {
    return std::span<const std::string>(refs.references).first(std::min(config.num_references, refs.references.size()));
}

SparseQuery sparse_query_for(std::string_view query, std::span<const std::string> refs, const PipelineConfig& config) {
    if (refs.empty()) {
        SparseQuery plain;
        plain.tokens = tokenize(query);
        plain.query_repeats = 1;
        return plain;
    }
    return build_sparse_query(query, refs, config.reweight);
}

PipelineResult run_one(const std::string& query_id, std::string_view query, const ReferenceSet& refs,
                       const IndexedCorpus& corpus, const EmbeddingProvider& provider, const PipelineConfig& config) {
    const auto policy = corpus.index.field_policy();
    const auto used = used_references(refs, config);

    PipelineResult result;
    result.sparse_query = sparse_query_for(query, used, config);
    result.bm25 = bm25_search(corpus.index, config.bm25, result.sparse_query.tokens, config.retrieve_k);
    result.bm25.query_id = query_id;
    result.pre.query_id = query_id;
    result.post.query_id = query_id;
    if (result.bm25.empty()) return result;

    std::vector<Document> candidates;
    candidates.reserve(result.bm25.size());
    for (const auto& e : result.bm25.entries) candidates.push_back(corpus.store.at(e.doc_id));

    const EmbeddingVector query_embedding =
        used.empty() ? provider.embed(query) : embed_query(config.strategy, provider, query, used);
    result.pre = rerank(provider, query_embedding, candidates, query_id, policy);

    if (!config.calibrate || used.empty()) {
        result.post = result.pre;
        return result;
    }
    result.feedback = build_feedback_sets(result.bm25, result.pre, used, corpus.store, config.calibration, policy);
    const EmbeddingVector calibrated = calibrate(provider, query, result.feedback, config.calibration);
    result.post = final_rank(provider, calibrated, candidates, query_id, policy);
    return result;
}

}  // namespace

Ranking sparse_stage(const std::string& query_id, std::string_view query, const ReferenceSet& refs,
                     const InvertedIndex& index, const PipelineConfig& config) {
    config.validate();
    const auto sparse = sparse_query_for(query, used_references(refs, config), config);
    Ranking r = bm25_search(index, config.bm25, sparse.tokens, config.retrieve_k);
    r.query_id = query_id;
    return r;
}

PipelineResult mugi_pipeline(const std::string& query_id, std::string_view query, const ReferenceSet& refs,
                             const IndexedCorpus& corpus, const EmbeddingProvider& provider,
                             const PipelineConfig& config) {
    config.validate();
    CachingEmbeddingProvider cached(provider);
    return run_one(query_id, query, refs, corpus, cached, config);
}

PipelineResult mugi_pipeline(const std::string& query_id, std::string_view query, ReferenceSource& source,
                             const IndexedCorpus& corpus, const EmbeddingProvider& provider,
                             const PipelineConfig& config) {
    config.validate();
    const ReferenceSet refs = source.fetch(query_id, query, config.model_id);
    return mugi_pipeline(query_id, query, refs, corpus, provider, config);
}

PipelineRuns run_queries(std::span<const Query> queries, ReferenceSource& source, const IndexedCorpus& corpus,
                         const EmbeddingProvider* provider, const PipelineConfig& config, std::size_t jobs) {
    config.validate();
    PipelineRuns runs;
    runs.bm25.resize(queries.size());
    if (provider != nullptr) {
        runs.pre.resize(queries.size());
        runs.post.resize(queries.size());
    }
    std::optional<CachingEmbeddingProvider> cached;
    if (provider != nullptr) cached.emplace(*provider);

    detail::parallel_for(queries.size(), jobs, [&](std::size_t i) {
        const Query& q = queries[i];
        const ReferenceSet refs = source.fetch(q.query_id, q.text, config.model_id);
        if (!cached) {
            runs.bm25[i] = sparse_stage(q.query_id, q.text, refs, corpus.index, config);
            return;
        }
        auto result = run_one(q.query_id, q.text, refs, corpus, *cached, config);
        runs.bm25[i] = std::move(result.bm25);
        runs.pre[i] = std::move(result.pre);
        runs.post[i] = std::move(result.post);
    });
    return runs;
}

// ---------------------------------------------------------------------------
// Sweeps

SweepAxis parse_sweep_axis(std::string_view name) {
    if (name == "beta") return SweepAxis::beta;
    if (name == "t") return SweepAxis::t;
    if (name == "alpha") return SweepAxis::alpha;
    if (name == "n_refs") return SweepAxis::n_refs;
    if (name == "strategy") return SweepAxis::strategy;
    throw InvalidArgument("unknown sweep axis '" + std::string(name) + "' (expected beta, t, alpha, n_refs or strategy)");
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::beta: return "beta";
        case SweepAxis::t: return "t";
        case SweepAxis::alpha: return "alpha";
        case SweepAxis::n_refs: return "n_refs";
        case SweepAxis::strategy: return "strategy";
    }
    return "?";
}

namespace {

double parse_real(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidArgument(std::string("bad ") + what + " value '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string& s, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s.front() != '-') v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidArgument(std::string("bad ") + what + " value '" + s + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

PipelineConfig apply_sweep_value(const PipelineConfig& base, SweepAxis axis, const std::string& value) {
    PipelineConfig cfg = base;
    switch (axis) {
        case SweepAxis::beta: cfg.reweight.strategy = AdaptiveReweight{parse_real(value, "beta")}; break;
        case SweepAxis::t: cfg.reweight.strategy = ConstantRepetition{parse_count(value, "t")}; break;
        case SweepAxis::alpha: cfg.calibration.alpha = parse_real(value, "alpha"); break;
        case SweepAxis::n_refs: cfg.num_references = parse_count(value, "n_refs"); break;
        case SweepAxis::strategy: cfg.strategy = parse_strategy(value); break;
    }
    cfg.validate();
    return cfg;
}

std::vector<SweepRow> sweep(SweepAxis axis, std::span<const std::string> values, const PipelineConfig& base,
                            std::span<const Query> queries, const Qrels& qrels, ReferenceSource& source,
                            const IndexedCorpus& corpus, const EmbeddingProvider* provider, std::size_t jobs) {
    std::vector<PipelineConfig> configs;
    configs.reserve(values.size());
    for (const auto& v : values) configs.push_back(apply_sweep_value(base, axis, v));

    if (axis == SweepAxis::n_refs) {
        std::size_t required = 0;
        for (const auto& c : configs) required = std::max(required, c.num_references);
        for (const auto& q : queries) {
            const auto refs = source.fetch(q.query_id, q.text, base.model_id);
            if (refs.references.size() < required) {
                throw InvalidArgument("n_refs sweep requires n=" + std::to_string(required) +
                                      " cached references per query; query '" + q.query_id + "' has " +
                                      std::to_string(refs.references.size()));
            }
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const PipelineConfig& cfg = configs[i];
        const auto runs = run_queries(queries, source, corpus, provider, cfg, jobs);
        const std::string fp = fingerprint(cfg);
        SweepRow row{values[i], cfg, evaluate_run(runs.bm25, qrels, cfg.eval_k, cfg.gain, fp + "/bm25"), {}, {}};
        if (provider != nullptr) {
            row.pre = evaluate_run(runs.pre, qrels, cfg.eval_k, cfg.gain, fp + "/pre");
            row.post = evaluate_run(runs.post, qrels, cfg.eval_k, cfg.gain, fp + "/post");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_sweep_table(SweepAxis axis, std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << std::left << std::setw(14) << to_string(axis) << std::right << std::setw(10) << "bm25" << std::setw(10)
        << "pre" << std::setw(10) << "post" << std::setw(8) << "eval" << "  fingerprint\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& row : rows) {
        out << std::left << std::setw(14) << row.value << std::right << std::setw(10) << row.bm25.mean;
        if (row.pre) {
            out << std::setw(10) << row.pre->mean << std::setw(10) << row.post->mean;
        } else {
            out << std::setw(10) << "-" << std::setw(10) << "-";
        }
        out << std::setw(8) << row.bm25.evaluated << "  " << fingerprint(row.config) << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
    return {
        {"k", report.k},
        {"gain", to_string(report.gain)},
        {"skip_policy", "queries without positive judgments are skipped"},
        {"mean", report.mean},
        {"evaluated", report.evaluated},
        {"skipped", report.skipped},
        {"per_query", report.per_query},
        {"fingerprint", report.fingerprint},
    };
}

nlohmann::json to_json(SweepAxis axis, const SweepRow& row) {
    nlohmann::json j = {
        {"axis", to_string(axis)},
        {"value", row.value},
        {"config", to_json(row.config)},
        {"config_fingerprint", fingerprint(row.config)},
        {"bm25", to_json(row.bm25)},
    };
    if (row.pre) j["pre"] = to_json(*row.pre);
    if (row.post) j["post"] = to_json(*row.post);
    return j;
}

}  // namespace mugi
