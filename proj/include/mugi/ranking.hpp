#pragma once

#include <string>
#include <vector>

namespace mugi {

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

// Ordered result list for one query: score descending, ties by ascending
// doc_id.
struct Ranking {
    std::string query_id;
    std::vector<ScoredDoc> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
    std::vector<std::string> doc_ids() const;

    friend bool operator==(const Ranking&, const Ranking&) = default;
};

// Orders by score descending then doc_id ascending.
bool ranks_before(const ScoredDoc& a, const ScoredDoc& b);
void sort_entries(std::vector<ScoredDoc>& entries);

// First min(k, size) entries.
std::vector<std::string> top_ids(const Ranking& ranking, std::size_t k);

}  // namespace mugi
