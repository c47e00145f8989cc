#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mugi/corpus.hpp"
#include "mugi/index.hpp"
#include "mugi/reference_set.hpp"

namespace mugi {

// The m distinct tokens with the highest idf against `index`, ties broken by
// ascending token. Tokens absent from the index have df = 0 and so the
// highest idf.
std::vector<std::string> top_idf_terms(std::span<const Token> tokens, const InvertedIndex& index, std::size_t m);

struct KeywordOverlap {
    std::vector<std::string> gt_top;      // top-m idf terms of the ground-truth passages
    std::vector<std::string> pse_top;     // top-m idf terms of the pseudo-references
    std::vector<std::string> query_terms; // distinct query tokens
    std::size_t gt_pse = 0;               // |gt_top ∩ pse_top|
    std::size_t gt_query = 0;             // |gt_top ∩ query_terms|
};

// Compares the highest-idf vocabulary of relevant passages with that of the
// references and of the query. Throws InvalidArgument for empty gt_docs.
KeywordOverlap keyword_overlap(std::string_view query, const ReferenceSet& refs,
                               std::span<const Document> gt_docs, const InvertedIndex& index,
                               std::size_t m = 10, FieldPolicy policy = FieldPolicy::title_plus_text);

}  // namespace mugi
