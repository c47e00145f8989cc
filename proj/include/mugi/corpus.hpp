#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mugi {

struct Document {
    std::string doc_id;
    std::string title;
    std::string text;

    friend bool operator==(const Document&, const Document&) = default;
};

enum class FieldPolicy { text_only, title_plus_text };

// Text that gets indexed and embedded for a document: "title text", or just
// the body under text_only.
std::string document_text(const Document& doc, FieldPolicy policy = FieldPolicy::title_plus_text);

// BEIR-style corpus: one JSON object per line with `_id`, `text` and an
// optional `title`. Blank lines are skipped. Throws ParseError carrying the
// line number on malformed input.
std::vector<Document> load_corpus_jsonl(const std::filesystem::path& path);

FieldPolicy parse_field_policy(const std::string& name);
const char* to_string(FieldPolicy policy);

}  // namespace mugi
