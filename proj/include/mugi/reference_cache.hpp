#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mugi/reference_set.hpp"

namespace mugi {

// One JSON object per line:
// {"query_id","query","model","prompt_version","references":[...],"created_at"}
std::string serialize_reference_set(const ReferenceSet& rs);
// Throws InvalidArgument describing the problem (callers add line context).
ReferenceSet parse_reference_set(std::string_view line);

// JSONL-backed store of reference sets keyed by (query_id, model_id). Later
// lines for the same key win. put() appends to the backing file; puts are
// serialized and reads may run concurrently with them.
class ReferenceCache {
public:
    // Purely in-memory cache.
    ReferenceCache() = default;
    // Loads `path` if it exists; puts append to it. Throws ParseError with the
    // line number for a corrupt line.
    explicit ReferenceCache(std::filesystem::path path);

    ReferenceCache(const ReferenceCache&) = delete;
    ReferenceCache& operator=(const ReferenceCache&) = delete;

    void put(const ReferenceSet& rs);
    std::optional<ReferenceSet> get(const std::string& query_id, const std::string& model_id) const;
    // Most recently stored set for the query under any model.
    std::optional<ReferenceSet> latest(const std::string& query_id) const;

    std::size_t size() const;
    const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

private:
    void insert_locked(ReferenceSet rs);

    std::optional<std::filesystem::path> path_;
    mutable std::mutex mutex_;
    std::map<std::pair<std::string, std::string>, ReferenceSet> entries_;
    std::map<std::string, std::string> latest_model_;
};

}  // namespace mugi
