#pragma once

#include <span>
#include <string>

#include "mugi/corpus.hpp"
#include "mugi/embedding.hpp"
#include "mugi/ranking.hpp"

namespace mugi {

// Scores every candidate by cosine similarity with `query_embedding` and
// sorts best first, ties by doc_id. Documents are embedded as
// document_text(doc, policy). A provider failure is rethrown as ServiceError
// naming the document.
Ranking rerank(const EmbeddingProvider& provider, const EmbeddingVector& query_embedding,
               std::span<const Document> candidates, std::string query_id = {},
               FieldPolicy policy = FieldPolicy::title_plus_text);

}  // namespace mugi
