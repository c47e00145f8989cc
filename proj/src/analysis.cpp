#include "mugi/analysis.hpp"

#include <algorithm>
#include <set>

#include "mugi/bm25.hpp"
#include "mugi/error.hpp"

namespace mugi {

std::vector<std::string> top_idf_terms(std::span<const Token> tokens, const InvertedIndex& index, std::size_t m) {
    const std::set<std::string> distinct(tokens.begin(), tokens.end());
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(distinct.size());
    for (const auto& t : distinct) scored.emplace_back(idf(index, t), t);
    const std::size_t keep = std::min(m, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });
    std::vector<std::string> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(scored[i].second));
    return out;
}

namespace {

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::set<std::string> sa(a.begin(), a.end());
    std::size_t n = 0;
    for (const auto& x : std::set<std::string>(b.begin(), b.end())) n += sa.count(x);
    return n;
}

}  // namespace

KeywordOverlap keyword_overlap(std::string_view query, const ReferenceSet& refs, std::span<const Document> gt_docs,
                               const InvertedIndex& index, std::size_t m, FieldPolicy policy) {
    if (gt_docs.empty()) throw InvalidArgument("keyword_overlap: no ground-truth documents");

    std::vector<Token> gt_tokens;
    for (const auto& d : gt_docs) {
        auto t = tokenize(document_text(d, policy));
        gt_tokens.insert(gt_tokens.end(), t.begin(), t.end());
    }
    std::vector<Token> pse_tokens;
    for (const auto& r : refs.references) {
        auto t = tokenize(r);
        pse_tokens.insert(pse_tokens.end(), t.begin(), t.end());
    }
    const auto q = tokenize(query);
    const std::set<std::string> q_distinct(q.begin(), q.end());

    KeywordOverlap out;
    out.gt_top = top_idf_terms(gt_tokens, index, m);
    out.pse_top = top_idf_terms(pse_tokens, index, m);
    out.query_terms.assign(q_distinct.begin(), q_distinct.end());
    out.gt_pse = intersection_size(out.gt_top, out.pse_top);
    out.gt_query = intersection_size(out.gt_top, out.query_terms);
    return out;
}

}  // namespace mugi
