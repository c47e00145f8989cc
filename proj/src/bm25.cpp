#include "mugi/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mugi/error.hpp"

namespace mugi {
namespace {

std::map<std::string_view, std::size_t> count_terms(std::span<const Token> tokens) {
    std::map<std::string_view, std::size_t> counts;
    for (const auto& t : tokens) ++counts[t];
    return counts;
}

// Per-occurrence contribution of a term with frequency tf in a document of
// length dl.
double term_weight(double term_idf, std::uint32_t tf, std::uint32_t dl, double avgdl, const BM25Params& p) {
    const double f = static_cast<double>(tf);
    const double norm = avgdl > 0.0 ? static_cast<double>(dl) / avgdl : 0.0;
    return term_idf * f * (p.k1 + 1.0) / (f + p.k1 * (1.0 - p.b + p.b * norm));
}

}  // namespace

void BM25Params::validate() const {
    if (!(k1 >= 0.0) || !std::isfinite(k1)) throw InvalidArgument("bm25: k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidArgument("bm25: b must lie in [0, 1]");
}

double idf(std::size_t num_docs, std::size_t df) {
    const double n = static_cast<double>(num_docs);
    const double d = static_cast<double>(df);
    return std::log1p((n - d + 0.5) / (d + 0.5));
}

double idf(const InvertedIndex& index, std::string_view term) {
    return idf(index.num_docs(), index.df(term));
}

double bm25_score(const InvertedIndex& index, const BM25Params& params, std::span<const Token> query_tokens,
                  std::string_view doc_id) {
    const auto doc = index.find_doc(doc_id);
    if (!doc) throw InvalidArgument("bm25_score: unknown doc_id '" + std::string(doc_id) + "'");
    const std::uint32_t dl = index.doc_length(*doc);

    double score = 0.0;
    for (const auto& [term, occurrences] : count_terms(query_tokens)) {
        const std::uint32_t tf = index.tf(term, *doc);
        if (tf == 0) continue;
        score += static_cast<double>(occurrences) * term_weight(idf(index, term), tf, dl, index.avgdl(), params);
    }
    return score;
}

Ranking bm25_search(const InvertedIndex& index, const BM25Params& params, std::span<const Token> query_tokens,
                    std::size_t top_k) {
    if (top_k == 0) throw InvalidArgument("bm25_search: top_k must be >= 1");
    Ranking ranking;
    if (index.num_docs() == 0 || query_tokens.empty()) return ranking;

    std::vector<double> acc(index.num_docs(), 0.0);
    std::vector<char> touched(index.num_docs(), 0);
    for (const auto& [term, occurrences] : count_terms(query_tokens)) {
        const auto list = index.postings(term);
        if (list.empty()) continue;
        const double term_idf = idf(index.num_docs(), list.size());
        const double m = static_cast<double>(occurrences);
        for (const Posting& p : list) {
            acc[p.doc] += m * term_weight(term_idf, p.tf, index.doc_length(p.doc), index.avgdl(), params);
            touched[p.doc] = 1;
        }
    }

    std::vector<ScoredDoc> hits;
    for (DocNo d = 0; d < acc.size(); ++d) {
        if (touched[d] && acc[d] > 0.0) hits.push_back({index.doc_id(d), acc[d]});
    }
    const std::size_t keep = std::min(top_k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), ranks_before);
    hits.resize(keep);
    ranking.entries = std::move(hits);
    return ranking;
}

}  // namespace mugi
