#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "mugi/error.hpp"
#include "mugi/rerank.hpp"

using namespace mugi;

TEST_CASE("rerank", "[rerank]") {
    const HashingEmbedder f(256, 5);

    SECTION("single candidate scores its cosine") {
        const std::vector<Document> docs{{"d1", "Title", "body text"}};
        const auto q = f.embed("body");
        const auto r = rerank(f, q, docs, "q1");
        REQUIRE(r.size() == 1);
        CHECK(r.query_id == "q1");
        CHECK(r.entries[0].score == cosine_similarity(q, f.embed("Title body text")));
    }
    SECTION("a document identical to the query ranks first") {
        const std::vector<Document> docs{{"a", "", "solar panels on roofs"},
                                         {"b", "", "how do wind turbines work"},
                                         {"c", "", "wind power"},
                                         {"d", "", "turbines"}};
        const auto r = rerank(f, f.embed("how do wind turbines work"), docs);
        CHECK(r.entries.front().doc_id == "b");
        CHECK(r.entries.front().score == Catch::Approx(1.0));
    }
    SECTION("ties break by doc id") {
        const std::vector<Document> docs{{"z", "", "same words"}, {"m", "", "same words"}};
        const auto r = rerank(f, f.embed("same"), docs);
        CHECK(r.doc_ids() == std::vector<std::string>{"m", "z"});
    }
    SECTION("empty candidate list") {
        CHECK(rerank(f, f.embed("x"), std::vector<Document>{}).empty());
    }
    SECTION("failure names the document") {
        const std::vector<Document> docs{{"good", "", "text"}, {"bad", "", "!!!"}};
        CHECK_THROWS_WITH(rerank(f, f.embed("text"), docs), Catch::Matchers::ContainsSubstring("bad"));
    }
}

TEST_CASE("rerank is the argsort of exhaustive similarities", "[rerank][property]") {
    const HashingEmbedder f(48, 6);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> word(0, 25), len(1, 8);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Document> docs;
        for (int i = 0; i < 30; ++i) {
            std::string text;
            for (int k = len(rng); k > 0; --k) text += "w" + std::to_string(word(rng)) + " ";
            docs.push_back({"d" + std::to_string(i), "", text});
        }
        const auto q = f.embed("w1 w2 w3");
        const auto r = rerank(f, q, docs);

        std::vector<ScoredDoc> brute;
        for (const auto& d : docs) brute.push_back({d.doc_id, cosine_similarity(q, f.embed(d.text))});
        std::sort(brute.begin(), brute.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
            return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
        });
        REQUIRE(r.size() == docs.size());
        CHECK(r.entries == brute);
    }
}
