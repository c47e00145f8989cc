#include <catch2/catch_amalgamated.hpp>

#include "mugi/analysis.hpp"
#include "mugi/error.hpp"
#include "mugi/index.hpp"
#include "mugi/text.hpp"

using namespace mugi;

namespace {

const std::vector<Document> kDocs{
    {"d1", "", "rain clouds form when water vapor condenses"},
    {"d2", "", "clouds water rain"},
    {"d3", "", "water is wet"},
    {"d4", "", "the sun heats water"},
    {"d5", "", "rain falls"},
};

}  // namespace

TEST_CASE("top_idf_terms ranks by idf then token", "[analysis]") {
    const auto index = InvertedIndex::build(kDocs, FieldPolicy::text_only);
    // df: water 4, rain 3, clouds 2, the rest 1.
    const auto tokens = tokenize("water rain clouds condenses vapor water");
    CHECK(top_idf_terms(tokens, index, 2) == std::vector<std::string>{"condenses", "vapor"});
    CHECK(top_idf_terms(tokens, index, 4) == std::vector<std::string>{"condenses", "vapor", "clouds", "rain"});
    CHECK(top_idf_terms(tokens, index, 10).size() == 5);
    // Unseen tokens rank first.
    CHECK(top_idf_terms(tokenize("water zzz"), index, 1) == std::vector<std::string>{"zzz"});
}

TEST_CASE("keyword_overlap", "[analysis]") {
    const auto index = InvertedIndex::build(kDocs, FieldPolicy::text_only);
    const std::vector<Document> gt{kDocs[0]};
    const std::size_t m = 3;

    SECTION("references identical to the relevant passage share all m terms") {
        ReferenceSet refs;
        refs.references = {kDocs[0].text};
        const auto o = keyword_overlap("why rain", refs, gt, index, m, FieldPolicy::text_only);
        CHECK(o.gt_top.size() == m);
        CHECK(o.gt_pse == m);
        CHECK(o.gt_query == 0);
        CHECK(o.query_terms == std::vector<std::string>{"rain", "why"});
    }
    SECTION("disjoint references share nothing") {
        ReferenceSet refs;
        refs.references = {"sun heats"};
        const auto o = keyword_overlap("vapor", refs, gt, index, m, FieldPolicy::text_only);
        CHECK(o.gt_pse == 0);
        CHECK(o.gt_query == 1);
    }
    SECTION("empty ground truth") {
        CHECK_THROWS_AS(keyword_overlap("q", ReferenceSet{}, std::span<const Document>{}, index), InvalidArgument);
    }
}
