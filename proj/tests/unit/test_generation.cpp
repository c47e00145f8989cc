#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "mugi/error.hpp"
#include "mugi/generation.hpp"
#include "mugi/reference_cache.hpp"
#include "stub_server.hpp"

using namespace mugi;
namespace fs = std::filesystem;

namespace {

std::string chat_reply(const std::vector<std::string>& contents) {
    nlohmann::json choices = nlohmann::json::array();
    for (std::size_t i = 0; i < contents.size(); ++i) {
        choices.push_back({{"index", i}, {"message", {{"role", "assistant"}, {"content", contents[i]}}}});
    }
    return nlohmann::json{{"choices", choices}}.dump();
}

GenerationConfig fast_config(std::size_t n) {
    GenerationConfig cfg;
    cfg.model_id = "stub-model";
    cfg.n = n;
    cfg.max_retries = 2;
    cfg.backoff_base = std::chrono::milliseconds(1);
    cfg.timeout = std::chrono::milliseconds(5000);
    return cfg;
}

fs::path temp_path(const std::string& name) {
    return fs::temp_directory_path() / ("mugi_test_gen_" + std::to_string(::getpid()) + "_" + name);
}

ReferenceSet sample_set(const std::string& qid, const std::string& model) {
    return ReferenceSet{qid, "what is bm25", {"first passage", "second passage"}, model, std::string(kPromptVersion),
                        "2024-05-01T12:00:00Z"};
}

}  // namespace

TEST_CASE("render_prompt", "[generation]") {
    CHECK_THAT(render_prompt("what is bm25"), Catch::Matchers::ContainsSubstring("what is bm25"));
    CHECK(render_prompt("q") == render_prompt("q"));
    const std::string tricky = "say \"hi\"\nthen {leave}";
    CHECK_THAT(render_prompt(tricky), Catch::Matchers::ContainsSubstring(tricky));
    CHECK_THROWS_AS(render_prompt(""), InvalidArgument);
}

TEST_CASE("chat wire format", "[generation]") {
    const auto body = nlohmann::json::parse(chat_request_body("P", fast_config(3), 3));
    CHECK(body["model"] == "stub-model");
    CHECK(body["n"] == 3);
    CHECK(body["temperature"] == 1.0);
    CHECK(body["messages"][0]["role"] == "user");
    CHECK(body["messages"][0]["content"] == "P");

    CHECK(parse_chat_response(chat_reply({"a", "b"})) == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(parse_chat_response("nope"), ServiceError);
    CHECK_THROWS_AS(parse_chat_response("{}"), ServiceError);
}

TEST_CASE("generate_references against a stub endpoint", "[generation][http]") {
    SECTION("n = 1 returns the fixed text") {
        testing::StubServer server("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(chat_reply({"  P  "}), "application/json");
        });
        OpenAIChatService service({server.url(), ""});
        const auto rs = generate_references(service, "q1", "what is bm25", fast_config(1));
        CHECK(rs.references == std::vector<std::string>{"P"});
        CHECK(rs.query_id == "q1");
        CHECK(rs.model_id == "stub-model");
        CHECK(rs.prompt_version == kPromptVersion);
        CHECK_FALSE(rs.created_at.empty());
    }
    SECTION("n = 5 keeps arrival order and asks for n completions") {
        std::atomic<int> requested_n{0};
        testing::StubServer server("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
            const auto body = nlohmann::json::parse(req.body);
            requested_n = body["n"].get<int>();
            std::vector<std::string> out;
            for (int i = 0; i < requested_n; ++i) out.push_back("passage " + std::to_string(i));
            res.set_content(chat_reply(out), "application/json");
        });
        OpenAIChatService service({server.url(), ""});
        const auto rs = generate_references(service, "q2", "query", fast_config(5));
        CHECK(requested_n == 5);
        REQUIRE(rs.references.size() == 5);
        for (int i = 0; i < 5; ++i) CHECK(rs.references[i] == "passage " + std::to_string(i));
    }
    SECTION("empty completions are re-requested") {
        std::atomic<int> calls{0};
        testing::StubServer server("/c", [&](const httplib::Request&, httplib::Response& res) {
            res.set_content(++calls == 1 ? chat_reply({"", "one", "  "}) : chat_reply({"two", "three"}),
                            "application/json");
        });
        OpenAIChatService service({server.url(), ""});
        const auto rs = generate_references(service, "q3", "query", fast_config(3));
        CHECK(rs.references == std::vector<std::string>{"one", "two", "three"});
    }
    SECTION("always-empty completions fail naming the query") {
        testing::StubServer server("/c", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(chat_reply({" "}), "application/json");
        });
        OpenAIChatService service({server.url(), ""});
        CHECK_THROWS_WITH(generate_references(service, "q-empty", "query", fast_config(1)),
                          Catch::Matchers::ContainsSubstring("q-empty"));
    }
    SECTION("HTTP 500 is retried max_retries times then surfaced") {
        testing::StubServer server("/c", [](const httplib::Request&, httplib::Response& res) {
            res.status = 500;
            res.set_content("boom", "text/plain");
        });
        OpenAIChatService service({server.url(), ""});
        const auto cfg = fast_config(1);
        CHECK_THROWS_AS(generate_references(service, "q4", "query", cfg), ServiceError);
        CHECK(server.requests() == static_cast<int>(cfg.max_retries) + 1);
    }
    SECTION("transient failure recovers") {
        std::atomic<int> calls{0};
        testing::StubServer server("/c", [&](const httplib::Request&, httplib::Response& res) {
            if (++calls == 1) {
                res.status = 503;
                return;
            }
            res.set_content(chat_reply({"ok"}), "application/json");
        });
        OpenAIChatService service({server.url(), ""});
        CHECK(generate_references(service, "q5", "query", fast_config(1)).references == std::vector<std::string>{"ok"});
    }
    SECTION("credential comes from the named environment variable") {
        std::string seen;
        testing::StubServer server("/c", [&](const httplib::Request& req, httplib::Response& res) {
            seen = req.get_header_value("Authorization");
            res.set_content(chat_reply({"x"}), "application/json");
        });
        ::setenv("MUGI_TEST_KEY", "secret-token", 1);
        OpenAIChatService service({server.url(), "MUGI_TEST_KEY"});
        generate_references(service, "q6", "query", fast_config(1));
        CHECK(seen == "Bearer secret-token");
        ::unsetenv("MUGI_TEST_KEY");
        CHECK_THROWS_AS(generate_references(service, "q6", "query", fast_config(1)), InvalidArgument);
    }
    SECTION("result is persisted before returning") {
        testing::StubServer server("/c", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(chat_reply({"cached"}), "application/json");
        });
        OpenAIChatService service({server.url(), ""});
        ReferenceCache cache;
        const auto rs = generate_references(service, "q7", "query", fast_config(1), &cache);
        CHECK(cache.get("q7", "stub-model") == rs);
    }
}

TEST_CASE("reference cache", "[generation][cache]") {
    const auto path = temp_path("cache.jsonl");
    fs::remove(path);

    SECTION("put then get, and reopening reads the same sets") {
        const auto a = sample_set("q1", "m1");
        const auto b = sample_set("q1", "m2");
        {
            ReferenceCache cache(path);
            cache.put(a);
            cache.put(b);
            CHECK(cache.get("q1", "m1") == a);
            CHECK(cache.get("q1", "m2") == b);
            CHECK_FALSE(cache.get("q2", "m1").has_value());
            CHECK(cache.latest("q1") == b);
        }
        ReferenceCache reopened(path);
        CHECK(reopened.size() == 2);
        CHECK(reopened.get("q1", "m1") == a);
        CHECK(reopened.get("q1", "m2") == b);
    }
    SECTION("corrupt line reports its number") {
        std::ofstream(path) << serialize_reference_set(sample_set("q1", "m")) << "\n{\"query_id\": 3}\n";
        try {
            ReferenceCache cache(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("line layout") {
        const auto j = nlohmann::json::parse(serialize_reference_set(sample_set("q9", "m")));
        for (const char* key : {"query_id", "query", "model", "prompt_version", "references", "created_at"}) {
            CHECK(j.contains(key));
        }
    }
    fs::remove(path);
}

TEST_CASE("cache round-trips arbitrary unicode text", "[generation][cache][property]") {
    std::mt19937_64 rng(41);
    // Code points from several planes, excluding surrogates.
    const std::vector<std::pair<char32_t, char32_t>> ranges = {
        {0x20, 0x7e}, {0x00, 0x1f}, {0xa0, 0x2ff}, {0x400, 0x4ff}, {0x4e00, 0x4eff}, {0x1f600, 0x1f64f}};
    auto encode = [](char32_t cp, std::string& out) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        } else {
            out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
        }
    };
    auto random_text = [&] {
        std::string s;
        const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 40)(rng);
        for (std::size_t i = 0; i < len; ++i) {
            const auto& [lo, hi] = ranges[std::uniform_int_distribution<std::size_t>(0, ranges.size() - 1)(rng)];
            encode(std::uniform_int_distribution<char32_t>(lo, hi)(rng), s);
        }
        return s;
    };

    const auto path = temp_path("unicode.jsonl");
    fs::remove(path);
    std::vector<ReferenceSet> written;
    {
        ReferenceCache cache(path);
        for (int i = 0; i < 200; ++i) {
            ReferenceSet rs{"q" + std::to_string(i), random_text(), {}, random_text(), "v", "2024-01-01T00:00:00Z"};
            for (int r = 0; r < 3; ++r) rs.references.push_back(random_text());
            REQUIRE(parse_reference_set(serialize_reference_set(rs)) == rs);
            cache.put(rs);
            written.push_back(rs);
        }
    }
    ReferenceCache reopened(path);
    for (const auto& rs : written) CHECK(reopened.get(rs.query_id, rs.model_id) == rs);
    fs::remove(path);
}
