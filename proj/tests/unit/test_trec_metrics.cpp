#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mugi/error.hpp"
#include "mugi/metrics.hpp"
#include "mugi/trec.hpp"

using namespace mugi;

namespace {

Ranking ranking_of(std::string qid, std::initializer_list<const char*> ids) {
    Ranking r{std::move(qid), {}};
    double score = 10;
    for (const char* id : ids) r.entries.push_back({id, score--});
    return r;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("mugi_test_trec_" + name);
}

}  // namespace

TEST_CASE("ndcg_at_k examples", "[metrics]") {
    const std::map<std::string, int> one{{"d1", 1}};
    CHECK(*ndcg_at_k(ranking_of("q", {"d1", "d2", "d3"}), one, 10) == 1.0);
    CHECK(*ndcg_at_k(ranking_of("q", {"d2", "d1", "d3"}), one, 10) == Catch::Approx(0.6309297535714575).epsilon(1e-12));
    CHECK(*ndcg_at_k(ranking_of("q", {"d2", "d3"}), one, 10) == 0.0);
    CHECK(*ndcg_at_k(ranking_of("q", {"d2", "d1"}), one, 1) == 0.0);
    CHECK_FALSE(ndcg_at_k(ranking_of("q", {"d1"}), std::map<std::string, int>{{"d1", 0}}, 10).has_value());
    CHECK_FALSE(ndcg_at_k(ranking_of("q", {"d1"}), std::map<std::string, int>{}, 10).has_value());
    CHECK_THROWS_AS(ndcg_at_k(ranking_of("q", {"d1"}), one, 0), InvalidArgument);
}

TEST_CASE("ndcg gain variants", "[metrics]") {
    const std::map<std::string, int> graded{{"a", 2}, {"b", 1}};
    const auto r = ranking_of("q", {"b", "a"});
    // linear: (1 + 2/log2 3) / (2 + 1/log2 3)
    const double l3 = std::log2(3.0);
    CHECK(*ndcg_at_k(r, graded, 10, Gain::linear) == Catch::Approx((1 + 2 / l3) / (2 + 1 / l3)).epsilon(1e-12));
    // exponential: (1 + 3/log2 3) / (3 + 1/log2 3)
    CHECK(*ndcg_at_k(r, graded, 10, Gain::exponential) == Catch::Approx((1 + 3 / l3) / (3 + 1 / l3)).epsilon(1e-12));
    CHECK(parse_gain("linear") == Gain::linear);
    CHECK(parse_gain("exponential") == Gain::exponential);
    CHECK_THROWS_AS(parse_gain("log"), InvalidArgument);
}

TEST_CASE("ndcg properties", "[metrics][property]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 20)(rng);
        std::vector<double> scores(static_cast<std::size_t>(n));
        std::map<std::string, int> judgments;
        for (int i = 0; i < n; ++i) {
            scores[static_cast<std::size_t>(i)] = std::uniform_real_distribution<double>(-5, 5)(rng);
            const int g = std::uniform_int_distribution<int>(0, 3)(rng);
            if (g > 0) judgments["d" + std::to_string(i)] = g;
        }
        if (judgments.empty()) judgments["d0"] = 1;
        auto rank_by = [&](auto transform) {
            Ranking r{"q", {}};
            for (int i = 0; i < n; ++i) r.entries.push_back({"d" + std::to_string(i), transform(scores[static_cast<std::size_t>(i)])});
            sort_entries(r.entries);
            return r;
        };
        const std::size_t k = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 15)(rng));
        const auto base = ndcg_at_k(rank_by([](double s) { return s; }), judgments, k);
        const auto rescaled = ndcg_at_k(rank_by([](double s) { return 3.0 * s + 7.0; }), judgments, k);
        REQUIRE(base.has_value());
        CHECK(*base == *rescaled);
        CHECK(*base >= 0.0);
        CHECK(*base <= 1.0 + 1e-12);
    }
}

TEST_CASE("evaluate_run", "[metrics]") {
    const Qrels qrels{{"q1", {{"a", 1}}}, {"q2", {{"b", 1}}}, {"q3", {{"c", 0}}}};
    const std::vector<Ranking> run{ranking_of("q1", {"a"}), ranking_of("q2", {"x"}), ranking_of("q3", {"c"})};
    const auto report = evaluate_run(run, qrels, 10);
    CHECK(report.mean == 0.5);
    CHECK(report.evaluated == 2);
    CHECK(report.skipped == std::vector<std::string>{"q3"});
    CHECK(report.per_query.at("q1") == 1.0);
    CHECK(report.per_query.at("q2") == 0.0);

    const auto empty = evaluate_run(std::span<const Ranking>{}, qrels, 10);
    CHECK(empty.mean == 0.0);
    CHECK(empty.evaluated == 0);

    CHECK(evaluate_run(run, qrels, 10, Gain::linear, "a").fingerprint !=
          evaluate_run(run, qrels, 10, Gain::linear, "b").fingerprint);
    CHECK(evaluate_run(run, qrels, 10, Gain::linear, "a").fingerprint !=
          evaluate_run(run, qrels, 5, Gain::linear, "a").fingerprint);
    CHECK(evaluate_run(run, qrels, 10, Gain::linear, "a").fingerprint ==
          evaluate_run(run, qrels, 10, Gain::linear, "a").fingerprint);
}

TEST_CASE("qrels parsing", "[trec]") {
    std::istringstream in("q1 0 d7 3\nq1 0 d8 0\n\nq2\t0\td1\t1\n");
    const auto qrels = parse_qrels(in);
    CHECK(qrels.at("q1").at("d7") == 3);
    CHECK(qrels.at("q1").at("d8") == 0);
    CHECK(qrels.at("q2").at("d1") == 1);

    std::istringstream bad("q1 0 d7\n");
    CHECK_THROWS_AS(parse_qrels(bad), ParseError);
    std::istringstream bad_grade("q1 0 d7 x\n");
    try {
        parse_qrels(bad_grade, "judgments.txt");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("judgments.txt") != std::string::npos);
    }
}

TEST_CASE("run format and round trip", "[trec]") {
    Ranking r{"q1", {}};
    for (int i = 0; i < 100; ++i) r.entries.push_back({"doc" + std::to_string(i), 100.0 - i * 0.5});
    const std::vector<Ranking> run{r};

    std::ostringstream out;
    format_run(out, run, "tagx");
    std::istringstream lines(out.str());
    std::string first;
    std::getline(lines, first);
    CHECK(first == "q1 Q0 doc0 1 100.000000 tagx");

    const auto path = temp_path("run.txt");
    write_run(path, run);
    const auto back = read_run(path);
    REQUIRE(back.size() == 1);
    REQUIRE(back[0].entries.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(back[0].entries[i].doc_id == r.entries[i].doc_id);
        CHECK(back[0].entries[i].score == Catch::Approx(r.entries[i].score).margin(1e-6));
    }
    std::filesystem::remove(path);

    std::istringstream shuffled("q2 Q0 b 2 1.0 t\nq1 Q0 z 1 3.0 t\nq2 Q0 a 1 2.0 t\n");
    const auto parsed = parse_run(shuffled);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].query_id == "q2");
    CHECK(parsed[0].doc_ids() == std::vector<std::string>{"a", "b"});

    std::istringstream bad("q1 Q0 d1 one 1.0 t\n");
    CHECK_THROWS_AS(parse_run(bad), ParseError);
    std::istringstream zero_rank("q1 Q0 d1 0 1.0 t\n");
    CHECK_THROWS_AS(parse_run(zero_rank), ParseError);
}

TEST_CASE("queries tsv", "[trec]") {
    std::istringstream in("1\twhat causes rain\n2\ttab\tinside\n");
    const auto qs = parse_queries(in);
    REQUIRE(qs.size() == 2);
    CHECK(qs[0] == Query{"1", "what causes rain"});
    CHECK(qs[1].text == "tab\tinside");
    std::istringstream bad("no tab here\n");
    CHECK_THROWS_AS(parse_queries(bad), ParseError);

    const auto path = temp_path("queries.tsv");
    write_queries(path, qs);
    CHECK(read_queries(path) == qs);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_queries(temp_path("absent.tsv")), IoError);
}
