#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "mugi/error.hpp"
#include "mugi/reweight.hpp"

using namespace mugi;

namespace {

std::string words(std::size_t n, const std::string& w = "w") {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + w + std::to_string(i);
    return s;
}

}  // namespace

TEST_CASE("compute_lambda", "[reweight]") {
    SECTION("total 400, |q| 20, beta 4 -> 5") {
        const std::vector<std::string> refs{words(150), words(250)};
        CHECK(compute_lambda(refs, words(20), 4.0) == 5);
    }
    SECTION("five refs of 100 tokens, |q| 25 -> 5") {
        const std::vector<std::string> refs(5, words(100));
        CHECK(compute_lambda(refs, words(25), 4.0) == 5);
    }
    SECTION("clamped to lambda_min") {
        const std::vector<std::string> refs{words(100)};
        CHECK(compute_lambda(refs, words(30), 4.0) == 1);
        CHECK(compute_lambda(refs, words(30), 4.0, 0) == 0);
    }
    SECTION("errors") {
        const std::vector<std::string> refs{words(10)};
        CHECK_THROWS_AS(compute_lambda(refs, "", 4.0), InvalidArgument);
        CHECK_THROWS_AS(compute_lambda(refs, "?!", 4.0), InvalidArgument);
        CHECK_THROWS_AS(compute_lambda(refs, "q", 0.0), InvalidArgument);
        CHECK_THROWS_AS(compute_lambda(refs, "q", -1.0), InvalidArgument);
    }
}

TEST_CASE("lambda never decreases when a reference is added", "[reweight][property]") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> len(0, 120), qlen(1, 30);
    std::uniform_real_distribution<double> beta(0.5, 8.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string q = words(qlen(rng), "q");
        const double b = beta(rng);
        std::vector<std::string> refs;
        std::size_t previous = compute_lambda(refs, q, b);
        for (int i = 0; i < 6; ++i) {
            refs.push_back(words(len(rng)));
            const std::size_t now = compute_lambda(refs, q, b);
            CHECK(now >= previous);
            previous = now;
        }
    }
}

TEST_CASE("build_sparse_query", "[reweight]") {
    SECTION("adaptive: lambda 1 with one eight-token reference") {
        const std::vector<std::string> refs{"c d e f g h i j"};
        const auto sq = build_sparse_query("a b", refs, ReweightConfig{AdaptiveReweight{4.0}});
        CHECK(sq.query_repeats == 1);
        CHECK(sq.num_references == 1);
        auto tokens = sq.tokens;
        std::sort(tokens.begin(), tokens.end());
        CHECK(tokens == std::vector<Token>{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"});
    }
    SECTION("constant repetition t = 5") {
        const std::vector<std::string> refs{"x y"};
        const auto sq = build_sparse_query("a", refs, ReweightConfig{ConstantRepetition{5}});
        CHECK(std::count(sq.tokens.begin(), sq.tokens.end(), "a") == 5);
        CHECK(std::count(sq.tokens.begin(), sq.tokens.end(), "x") == 1);
        CHECK(sq.tokens.size() == 7);
    }
    SECTION("constant repetition t = 0 keeps only references") {
        const std::vector<std::string> refs{"x y", "z"};
        const auto sq = build_sparse_query("a", refs, ReweightConfig{ConstantRepetition{0}});
        CHECK(sq.tokens == std::vector<Token>{"x", "y", "z"});
        CHECK(sq.query_repeats == 0);
    }
    SECTION("adaptive requires references and a tokenizable query") {
        CHECK_THROWS_AS(build_sparse_query("a", std::vector<std::string>{}, ReweightConfig{}), InvalidArgument);
        CHECK_THROWS_AS(build_sparse_query("", std::vector<std::string>{"x"}, ReweightConfig{}), InvalidArgument);
    }
}

TEST_CASE("sparse query multiset is lambda copies of the query plus all references", "[reweight][property]") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> len(1, 40), nrefs(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::string q = words(len(rng) % 5 + 1, "q");
        std::vector<std::string> refs;
        for (std::size_t i = nrefs(rng); i > 0; --i) refs.push_back(words(len(rng), "r"));
        const auto sq = build_sparse_query(q, refs, ReweightConfig{AdaptiveReweight{3.0}});
        const std::size_t lambda = compute_lambda(refs, q, 3.0);
        CHECK(sq.query_repeats == lambda);
        std::size_t ref_tokens = 0;
        for (const auto& r : refs) ref_tokens += token_count(r);
        CHECK(sq.tokens.size() == lambda * token_count(q) + ref_tokens);
        CHECK(static_cast<std::size_t>(std::count(sq.tokens.begin(), sq.tokens.end(), "q0")) == lambda);
    }
}
