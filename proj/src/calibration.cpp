#include "mugi/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "mugi/rerank.hpp"
#include "mugi/text.hpp"

namespace mugi {

void CalibrationConfig::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("calibration: alpha must be >= 0");
    if (k_reciprocal < 1) throw InvalidArgument("calibration: k_reciprocal must be >= 1");
}

FeedbackSets build_feedback_sets(const Ranking& bm25, const Ranking& pre, std::span<const std::string> references,
                                 const DocumentStore& docs, const CalibrationConfig& config, FieldPolicy policy) {
    config.validate();
    if (bm25.empty()) throw InvalidArgument("build_feedback_sets: empty BM25 ranking");

    FeedbackSets fb;
    fb.num_references = references.size();
    fb.positives.assign(references.begin(), references.end());

    const auto bm25_top = top_ids(bm25, config.k_reciprocal);
    const std::unordered_set<std::string> in_bm25_top(bm25_top.begin(), bm25_top.end());
    std::unordered_set<std::string> positive_ids;
    for (const auto& id : top_ids(pre, config.k_reciprocal)) {
        if (in_bm25_top.count(id) != 0 && positive_ids.insert(id).second) {
            fb.reciprocal_doc_ids.push_back(id);
            fb.positives.push_back(document_text(docs.at(id), policy));
        }
    }

    const std::size_t take = std::min(config.num_negatives, bm25.size());
    fb.negative_shortfall = config.num_negatives - take;
    for (std::size_t i = bm25.size() - take; i < bm25.size(); ++i) {
        const auto& id = bm25.entries[i].doc_id;
        if (positive_ids.count(id) != 0) continue;
        fb.negative_doc_ids.push_back(id);
        fb.negatives.push_back(document_text(docs.at(id), policy));
    }
    return fb;
}

EmbeddingVector calibrate(const EmbeddingProvider& provider, std::string_view query, const FeedbackSets& feedback,
                          const CalibrationConfig& config) {
    config.validate();
    if (feedback.positives.empty()) throw InvalidArgument("calibrate: no positive feedback");

    std::vector<std::string> prefixed;
    prefixed.reserve(feedback.positives.size());
    for (const auto& p : feedback.positives) prefixed.push_back(join_with_space(query, p));
    const auto pos = provider.embed_batch(prefixed);

    EmbeddingVector positive_sum = EmbeddingVector::Zero(pos.front().size());
    for (const auto& v : pos) positive_sum += v;

    EmbeddingVector negative_sum = EmbeddingVector::Zero(positive_sum.size());
    if (!feedback.negatives.empty()) {
        for (const auto& v : provider.embed_batch(feedback.negatives)) {
            if (v.size() != negative_sum.size()) throw InvalidArgument("calibrate: dimension mismatch");
            negative_sum += v;
        }
    }

    const double w = static_cast<double>(feedback.weight());
    return (positive_sum - config.alpha * negative_sum) / w;
}

Ranking final_rank(const EmbeddingProvider& provider, const EmbeddingVector& calibrated,
                   std::span<const Document> candidates, std::string query_id, FieldPolicy policy) {
    return rerank(provider, calibrated, candidates, std::move(query_id), policy);
}

}  // namespace mugi
