#include <catch2/catch_amalgamated.hpp>

#include "mugi/text.hpp"

using mugi::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics", "[text]") {
    CHECK(tokenize("Cat sat.") == Tokens{"cat", "sat"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("BM25-score") == Tokens{"bm25", "score"});
    CHECK(tokenize("  --  ").empty());
    CHECK(tokenize("a\tb\nC") == Tokens{"a", "b", "c"});
}

TEST_CASE("tokenize keeps multi-byte characters inside tokens", "[text]") {
    CHECK(tokenize("café au lait") == Tokens{"café", "au", "lait"});
}

TEST_CASE("token_count agrees with tokenize", "[text]") {
    for (const char* s : {"", "one", "Cat sat.", "x-y-z  w", "  leading and trailing  "}) {
        CHECK(mugi::token_count(s) == tokenize(s).size());
    }
}

TEST_CASE("truncate_to_tokens keeps a prefix with the first n tokens", "[text]") {
    const std::string text = "Alpha, beta gamma! delta";
    CHECK(mugi::truncate_to_tokens(text, 10) == text);
    CHECK(mugi::truncate_to_tokens(text, 4) == text);
    CHECK(mugi::truncate_to_tokens(text, 2) == "Alpha, beta");
    CHECK(mugi::truncate_to_tokens(text, 0).empty());
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto prefix = tokenize(mugi::truncate_to_tokens(text, n));
        const auto all = tokenize(text);
        CHECK(prefix == Tokens(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)));
    }
}

TEST_CASE("join_with_space", "[text]") {
    const std::vector<std::string> parts{"q", "r1", "r2"};
    CHECK(mugi::join_with_space(parts) == "q r1 r2");
    CHECK(mugi::join_with_space("q", "r") == "q r");
}
