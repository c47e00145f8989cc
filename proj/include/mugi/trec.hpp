#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mugi/ranking.hpp"

namespace mugi {

// query_id -> doc_id -> grade. Missing pairs have grade 0.
using Qrels = std::map<std::string, std::map<std::string, int>>;

struct Query {
    std::string query_id;
    std::string text;

    friend bool operator==(const Query&, const Query&) = default;
};

// "query_id 0 doc_id grade" lines.
Qrels parse_qrels(std::istream& in, const std::string& source = "<qrels>");
Qrels read_qrels(const std::filesystem::path& path);
void write_qrels(const std::filesystem::path& path, const Qrels& qrels);

// "query_id Q0 doc_id rank score tag" lines with 1-based ranks and scores
// printed with six decimals.
void format_run(std::ostream& out, std::span<const Ranking> run, const std::string& tag = "mugi");
void write_run(const std::filesystem::path& path, std::span<const Ranking> run, const std::string& tag = "mugi");
// Queries appear in first-seen order; entries are ordered by the rank column.
std::vector<Ranking> parse_run(std::istream& in, const std::string& source = "<run>");
std::vector<Ranking> read_run(const std::filesystem::path& path);

// "query_id<TAB>query text" lines.
std::vector<Query> parse_queries(std::istream& in, const std::string& source = "<queries>");
std::vector<Query> read_queries(const std::filesystem::path& path);
void write_queries(const std::filesystem::path& path, std::span<const Query> queries);

}  // namespace mugi
