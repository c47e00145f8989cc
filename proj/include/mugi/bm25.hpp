#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "mugi/index.hpp"
#include "mugi/ranking.hpp"
#include "mugi/text.hpp"

namespace mugi {

struct BM25Params {
    double k1 = 0.9;
    double b = 0.4;

    // Throws InvalidArgument unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); non-negative for every df.
double idf(std::size_t num_docs, std::size_t df);
double idf(const InvertedIndex& index, std::string_view term);

// Sum over query token occurrences of the per-term BM25 weight against `doc_id`.
// A token repeated m times contributes m summands. Throws InvalidArgument for
// an unknown doc_id.
double bm25_score(const InvertedIndex& index, const BM25Params& params,
                  std::span<const Token> query_tokens, std::string_view doc_id);

// Term-at-a-time exhaustive search. Returns documents with positive score,
// best first, ties by doc_id, at most top_k of them.
Ranking bm25_search(const InvertedIndex& index, const BM25Params& params,
                    std::span<const Token> query_tokens, std::size_t top_k);

}  // namespace mugi
