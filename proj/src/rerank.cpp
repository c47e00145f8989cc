#include "mugi/rerank.hpp"

namespace mugi {
namespace {

std::vector<EmbeddingVector> embed_documents(const EmbeddingProvider& provider, std::span<const Document> docs,
                                             FieldPolicy policy) {
    std::vector<std::string> texts;
    texts.reserve(docs.size());
    for (const auto& d : docs) texts.push_back(document_text(d, policy));
    try {
        return provider.embed_batch(texts);
    } catch (const Error& batch_error) {
        // Retry one by one to name the document that fails.
        std::vector<EmbeddingVector> out;
        out.reserve(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
            try {
                out.push_back(provider.embed(texts[i]));
            } catch (const Error& e) {
                throw ServiceError("embedding document '" + docs[i].doc_id + "' failed: " + e.what());
            }
        }
        throw ServiceError(std::string("batched document embedding failed: ") + batch_error.what());
    }
}

}  // namespace

Ranking rerank(const EmbeddingProvider& provider, const EmbeddingVector& query_embedding,
               std::span<const Document> candidates, std::string query_id, FieldPolicy policy) {
    Ranking ranking;
    ranking.query_id = std::move(query_id);
    if (candidates.empty()) return ranking;

    const auto doc_vectors = embed_documents(provider, candidates, policy);
    ranking.entries.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranking.entries.push_back({candidates[i].doc_id, cosine_similarity(query_embedding, doc_vectors[i])});
    }
    sort_entries(ranking.entries);
    return ranking;
}

}  // namespace mugi
