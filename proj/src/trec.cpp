#include "mugi/trec.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mugi/error.hpp"

namespace mugi {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    // from_chars for double needs GCC 11+, which we require anyway.
    return parse_number(s, out);
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open ") + what + " file " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, const char* what) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(std::string("cannot write ") + what + " file " + path.string());
    return out;
}

}  // namespace

Qrels parse_qrels(std::istream& in, const std::string& source) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto f = split_ws(line);
        if (f.size() != 4) throw ParseError(source, line_no, "expected 'query_id iter doc_id grade'");
        int grade = 0;
        if (!parse_number(f[3], grade)) throw ParseError(source, line_no, "grade is not an integer");
        if (grade < 0) throw ParseError(source, line_no, "negative relevance grade");
        qrels[std::string(f[0])][std::string(f[2])] = grade;
    }
    return qrels;
}

Qrels read_qrels(const std::filesystem::path& path) {
    auto in = open_input(path, "qrels");
    return parse_qrels(in, path.string());
}

void write_qrels(const std::filesystem::path& path, const Qrels& qrels) {
    auto out = open_output(path, "qrels");
    for (const auto& [qid, docs] : qrels) {
        for (const auto& [doc, grade] : docs) out << qid << " 0 " << doc << ' ' << grade << '\n';
    }
}

void format_run(std::ostream& out, std::span<const Ranking> run, const std::string& tag) {
    char score[64];
    for (const auto& ranking : run) {
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            const auto& e = ranking.entries[i];
            std::snprintf(score, sizeof score, "%.6f", e.score);
            out << ranking.query_id << " Q0 " << e.doc_id << ' ' << (i + 1) << ' ' << score << ' ' << tag << '\n';
        }
    }
}

void write_run(const std::filesystem::path& path, std::span<const Ranking> run, const std::string& tag) {
    auto out = open_output(path, "run");
    format_run(out, run, tag);
    if (!out) throw IoError("failed writing run file " + path.string());
}

std::vector<Ranking> parse_run(std::istream& in, const std::string& source) {
    struct Row {
        std::size_t rank;
        ScoredDoc doc;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<Row>> rows;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto f = split_ws(line);
        if (f.size() != 6) throw ParseError(source, line_no, "expected 'query_id Q0 doc_id rank score tag'");
        Row row{};
        if (!parse_number(f[3], row.rank)) throw ParseError(source, line_no, "rank is not an integer");
        if (row.rank < 1) throw ParseError(source, line_no, "rank must be >= 1");
        if (!parse_double(f[4], row.doc.score)) throw ParseError(source, line_no, "score is not a number");
        row.doc.doc_id = std::string(f[2]);
        std::string qid(f[0]);
        auto [it, fresh] = rows.try_emplace(qid);
        if (fresh) order.push_back(qid);
        it->second.push_back(std::move(row));
    }

    std::vector<Ranking> run;
    run.reserve(order.size());
    for (const auto& qid : order) {
        auto& list = rows[qid];
        std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
        Ranking r;
        r.query_id = qid;
        r.entries.reserve(list.size());
        for (auto& row : list) r.entries.push_back(std::move(row.doc));
        run.push_back(std::move(r));
    }
    return run;
}

std::vector<Ranking> read_run(const std::filesystem::path& path) {
    auto in = open_input(path, "run");
    return parse_run(in, path.string());
}

std::vector<Query> parse_queries(std::istream& in, const std::string& source) {
    std::vector<Query> queries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) throw ParseError(source, line_no, "expected 'query_id<TAB>text'");
        queries.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return queries;
}

std::vector<Query> read_queries(const std::filesystem::path& path) {
    auto in = open_input(path, "queries");
    return parse_queries(in, path.string());
}

void write_queries(const std::filesystem::path& path, std::span<const Query> queries) {
    auto out = open_output(path, "queries");
    for (const auto& q : queries) out << q.query_id << '\t' << q.text << '\n';
}

}  // namespace mugi
