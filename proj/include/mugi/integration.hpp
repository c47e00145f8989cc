#pragma once

#include <span>
#include <string>
#include <string_view>

#include "mugi/embedding.hpp"
#include "mugi/reference_set.hpp"

namespace mugi {

enum class IntegrationStrategy { concat, mean_pool, contex_pool };

IntegrationStrategy parse_strategy(std::string_view name);
const char* to_string(IntegrationStrategy strategy);

// Componentwise mean of equally sized vectors. Throws InvalidArgument when
// empty or when sizes differ.
template <typename Scalar>
Vector<Scalar> mean_vector(std::span<const Vector<Scalar>> vectors) {
    if (vectors.empty()) throw InvalidArgument("mean_vector: no vectors");
    Vector<Scalar> sum = Vector<Scalar>::Zero(vectors.front().size());
    for (const auto& v : vectors) {
        if (v.size() != sum.size()) throw InvalidArgument("mean_vector: dimension mismatch");
        sum += v;
    }
    return sum / static_cast<Scalar>(vectors.size());
}

// f("q r1 ... rn"). The query leads, so truncation eats references first.
EmbeddingVector embed_concat(const EmbeddingProvider& provider, std::string_view query,
                             std::span<const std::string> refs);

// (f(q) + sum_i f(r_i)) / (n + 1).
EmbeddingVector embed_mean_pool(const EmbeddingProvider& provider, std::string_view query,
                                std::span<const std::string> refs);

// sum_i f("q r_i") / n.
EmbeddingVector embed_contex_pool(const EmbeddingProvider& provider, std::string_view query,
                                  std::span<const std::string> refs);

// Dispatches on strategy. All three require at least one reference.
EmbeddingVector embed_query(IntegrationStrategy strategy, const EmbeddingProvider& provider,
                            std::string_view query, std::span<const std::string> refs);

inline EmbeddingVector embed_query(IntegrationStrategy strategy, const EmbeddingProvider& provider,
                                   std::string_view query, const ReferenceSet& refs) {
    return embed_query(strategy, provider, query, refs.references);
}

}  // namespace mugi
