#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mugi/bm25.hpp"
#include "mugi/calibration.hpp"
#include "mugi/embedding.hpp"
#include "mugi/generation.hpp"
#include "mugi/index.hpp"
#include "mugi/integration.hpp"
#include "mugi/metrics.hpp"
#include "mugi/reference_cache.hpp"
#include "mugi/reweight.hpp"
#include "mugi/trec.hpp"

namespace mugi {

struct PipelineConfig {
    BM25Params bm25;
    ReweightConfig reweight;
    IntegrationStrategy strategy = IntegrationStrategy::contex_pool;
    CalibrationConfig calibration;
    bool calibrate = true;
    // Number of leading cached references to use; 0 runs plain BM25 followed by
    // a rerank with the bare query embedding.
    std::size_t num_references = 5;
    std::size_t retrieve_k = 100;
    std::size_t eval_k = 10;
    Gain gain = Gain::linear;
    // Empty: take the most recent cached set for each query.
    std::string model_id;

    void validate() const;
};

nlohmann::json to_json(const PipelineConfig& config);
// Hash of the canonical JSON form; differs whenever any field differs.
std::string fingerprint(const PipelineConfig& config);

// Supplies reference sets: cache first, then the chat service if one is
// configured, otherwise CacheMiss.
class ReferenceSource {
public:
    explicit ReferenceSource(ReferenceCache& cache, ChatService* service = nullptr,
                             GenerationConfig generation = {});

    // `model_id` empty: any model (most recent), or generation.model_id when
    // falling back to the service.
    ReferenceSet fetch(const std::string& query_id, std::string_view query, const std::string& model_id = {});

private:
    ReferenceCache& cache_;
    ChatService* service_;
    GenerationConfig generation_;
};

struct PipelineResult {
    Ranking bm25;
    Ranking pre;
    Ranking post;
    SparseQuery sparse_query;
    FeedbackSets feedback;
};

// Sparse stage only: the expanded query run through BM25 (top retrieve_k).
// With zero references this is plain BM25 on the query.
Ranking sparse_stage(const std::string& query_id, std::string_view query, const ReferenceSet& refs,
                     const InvertedIndex& index, const PipelineConfig& config);

// Full run for one query: expanded BM25 retrieval, dense rerank of the
// candidates with the integrated query embedding, then calibration.
PipelineResult mugi_pipeline(const std::string& query_id, std::string_view query, const ReferenceSet& refs,
                             const IndexedCorpus& corpus, const EmbeddingProvider& provider,
                             const PipelineConfig& config);
PipelineResult mugi_pipeline(const std::string& query_id, std::string_view query, ReferenceSource& source,
                             const IndexedCorpus& corpus, const EmbeddingProvider& provider,
                             const PipelineConfig& config);

struct PipelineRuns {
    std::vector<Ranking> bm25;
    std::vector<Ranking> pre;
    std::vector<Ranking> post;
};

// Runs every query, `jobs` at a time. Rankings come back in query order.
// A null provider runs the sparse stage only and leaves pre/post empty.
PipelineRuns run_queries(std::span<const Query> queries, ReferenceSource& source, const IndexedCorpus& corpus,
                         const EmbeddingProvider* provider, const PipelineConfig& config, std::size_t jobs = 1);

enum class SweepAxis { beta, t, alpha, n_refs, strategy };

SweepAxis parse_sweep_axis(std::string_view name);
const char* to_string(SweepAxis axis);

// `base` with the axis set to `value` (parsed from text).
PipelineConfig apply_sweep_value(const PipelineConfig& base, SweepAxis axis, const std::string& value);

struct SweepRow {
    std::string value;
    PipelineConfig config;
    EvalReport bm25;
    std::optional<EvalReport> pre;
    std::optional<EvalReport> post;
};

// One row per value. The n_refs axis needs every query's cached set to hold
// at least max(values) references; otherwise InvalidArgument states the
// required count. Without a provider only the sparse stage is evaluated.
std::vector<SweepRow> sweep(SweepAxis axis, std::span<const std::string> values, const PipelineConfig& base,
                            std::span<const Query> queries, const Qrels& qrels, ReferenceSource& source,
                            const IndexedCorpus& corpus, const EmbeddingProvider* provider, std::size_t jobs = 1);

std::string format_sweep_table(SweepAxis axis, std::span<const SweepRow> rows);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(SweepAxis axis, const SweepRow& row);

}  // namespace mugi
