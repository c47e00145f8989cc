#include "mugi/ranking.hpp"

#include <algorithm>

namespace mugi {

std::vector<std::string> Ranking::doc_ids() const {
    std::vector<std::string> ids;
    ids.reserve(entries.size());
    for (const auto& e : entries) ids.push_back(e.doc_id);
    return ids;
}

bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
}

void sort_entries(std::vector<ScoredDoc>& entries) {
    std::sort(entries.begin(), entries.end(), ranks_before);
}

std::vector<std::string> top_ids(const Ranking& ranking, std::size_t k) {
    std::vector<std::string> ids;
    const std::size_t n = std::min(k, ranking.entries.size());
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back(ranking.entries[i].doc_id);
    return ids;
}

}  // namespace mugi
