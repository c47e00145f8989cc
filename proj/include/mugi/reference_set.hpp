#pragma once

#include <string>
#include <vector>

namespace mugi {

// Pseudo-references generated for one query, plus where they came from.
struct ReferenceSet {
    std::string query_id;
    std::string query;
    std::vector<std::string> references;
    std::string model_id;
    std::string prompt_version;
    std::string created_at;  // ISO-8601 UTC

    friend bool operator==(const ReferenceSet&, const ReferenceSet&) = default;
};

// Copy of `refs` keeping only the first `n` references.
ReferenceSet first_references(const ReferenceSet& refs, std::size_t n);

}  // namespace mugi
