#include "mugi/reference_cache.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mugi/error.hpp"

namespace mugi {

std::string serialize_reference_set(const ReferenceSet& rs) {
    const nlohmann::json obj = {
        {"query_id", rs.query_id},
        {"query", rs.query},
        {"model", rs.model_id},
        {"prompt_version", rs.prompt_version},
        {"references", rs.references},
        {"created_at", rs.created_at},
    };
    return obj.dump();
}

ReferenceSet parse_reference_set(std::string_view line) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw InvalidArgument("expected a JSON object");

    auto field = [&](const char* key) -> std::string {
        const auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) throw InvalidArgument(std::string("missing string field '") + key + "'");
        return it->get<std::string>();
    };

    ReferenceSet rs;
    rs.query_id = field("query_id");
    rs.query = field("query");
    rs.model_id = field("model");
    rs.prompt_version = field("prompt_version");
    rs.created_at = field("created_at");
    const auto refs = obj.find("references");
    if (refs == obj.end() || !refs->is_array()) throw InvalidArgument("missing array field 'references'");
    for (const auto& r : *refs) {
        if (!r.is_string()) throw InvalidArgument("non-string entry in 'references'");
        rs.references.push_back(r.get<std::string>());
    }
    return rs;
}

ReferenceCache::ReferenceCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(*path_);
    if (!in) {
        if (std::filesystem::exists(*path_)) throw IoError("cannot read reference cache " + path_->string());
        return;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            insert_locked(parse_reference_set(line));
        } catch (const InvalidArgument& e) {
            throw ParseError(path_->string(), line_no, e.what());
        }
    }
}

void ReferenceCache::insert_locked(ReferenceSet rs) {
    latest_model_[rs.query_id] = rs.model_id;
    auto key = std::make_pair(rs.query_id, rs.model_id);
    entries_.insert_or_assign(std::move(key), std::move(rs));
}

void ReferenceCache::put(const ReferenceSet& rs) {
    const std::string line = serialize_reference_set(rs);
    std::lock_guard lock(mutex_);
    if (path_) {
        std::ofstream out(*path_, std::ios::app | std::ios::binary);
        if (!out) throw IoError("cannot append to reference cache " + path_->string());
        out << line << '\n';
        out.flush();
        if (!out) throw IoError("failed writing reference cache " + path_->string());
    }
    insert_locked(rs);
}

std::optional<ReferenceSet> ReferenceCache::get(const std::string& query_id, const std::string& model_id) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find({query_id, model_id});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::optional<ReferenceSet> ReferenceCache::latest(const std::string& query_id) const {
    std::lock_guard lock(mutex_);
    const auto m = latest_model_.find(query_id);
    if (m == latest_model_.end()) return std::nullopt;
    return entries_.at({query_id, m->second});
}

std::size_t ReferenceCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

}  // namespace mugi
