#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mugi/corpus.hpp"
#include "mugi/embedding.hpp"
#include "mugi/index.hpp"
#include "mugi/ranking.hpp"
#include "mugi/reference_set.hpp"

namespace mugi {

struct RocchioWeights {
    double a = 1.0;
    double b = 0.75;
    double c = 0.15;
};

// Classic Rocchio: a*q + b*mean(positives) - c*mean(negatives). An empty set
// is allowed only when its weight is zero.
template <typename Scalar>
Vector<Scalar> rocchio_classic(const Vector<Scalar>& query, std::span<const Vector<Scalar>> positives,
                               std::span<const Vector<Scalar>> negatives, const RocchioWeights& w) {
    auto centroid = [&](std::span<const Vector<Scalar>> set, double weight, const char* label) {
        Vector<Scalar> sum = Vector<Scalar>::Zero(query.size());
        if (set.empty()) {
            if (weight != 0.0) {
                throw InvalidArgument(std::string("rocchio_classic: empty ") + label + " set with non-zero weight");
            }
            return sum;
        }
        for (const auto& v : set) {
            if (v.size() != query.size()) throw InvalidArgument("rocchio_classic: dimension mismatch");
            sum += v;
        }
        return Vector<Scalar>(sum * static_cast<Scalar>(weight / static_cast<double>(set.size())));
    };
    Vector<Scalar> out = static_cast<Scalar>(w.a) * query;
    out += centroid(positives, w.b, "positive");
    out -= centroid(negatives, w.c, "negative");
    return out;
}

struct CalibrationConfig {
    double alpha = 0.2;
    std::size_t k_reciprocal = 10;
    std::size_t num_negatives = 5;

    // Throws InvalidArgument unless alpha >= 0 and k_reciprocal >= 1.
    void validate() const;
};

struct FeedbackSets {
    // Reference texts first, then K-reciprocal document texts in I_pre order.
    std::vector<std::string> positives;
    // Tail of the BM25 ranking, in BM25 order.
    std::vector<std::string> negatives;

    std::size_t num_references = 0;
    std::vector<std::string> reciprocal_doc_ids;
    std::vector<std::string> negative_doc_ids;
    // How many negatives were requested but not available.
    std::size_t negative_shortfall = 0;

    std::size_t weight() const noexcept { return positives.size() + negatives.size(); }
};

// Positives are the references plus documents in the top-K of both rankings;
// negatives are the last num_negatives documents of the BM25 ranking, minus
// any that are already positives.
FeedbackSets build_feedback_sets(const Ranking& bm25, const Ranking& pre, std::span<const std::string> references,
                                 const DocumentStore& docs, const CalibrationConfig& config,
                                 FieldPolicy policy = FieldPolicy::title_plus_text);

// e'_q = (sum_{r in positives} f("q r") - alpha * sum_{n in negatives} f(n)) / W
// with W = |positives| + |negatives|. Throws InvalidArgument when there are
// no positives.
EmbeddingVector calibrate(const EmbeddingProvider& provider, std::string_view query,
                          const FeedbackSets& feedback, const CalibrationConfig& config);

// Same contract as rerank(), with the calibrated embedding.
Ranking final_rank(const EmbeddingProvider& provider, const EmbeddingVector& calibrated,
                   std::span<const Document> candidates, std::string query_id = {},
                   FieldPolicy policy = FieldPolicy::title_plus_text);

}  // namespace mugi
