#include "mugi/corpus.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mugi/error.hpp"

namespace mugi {

std::string document_text(const Document& doc, FieldPolicy policy) {
    if (policy == FieldPolicy::text_only || doc.title.empty()) return doc.text;
    std::string out;
    out.reserve(doc.title.size() + doc.text.size() + 1);
    out.append(doc.title).push_back(' ');
    out.append(doc.text);
    return out;
}

std::vector<Document> load_corpus_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file " + path.string());

    const std::string source = path.string();
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(source, line_no, "expected a JSON object");
        auto id = obj.find("_id");
        if (id == obj.end() || !id->is_string()) throw ParseError(source, line_no, "missing string field '_id'");
        auto text = obj.find("text");
        if (text == obj.end() || !text->is_string()) throw ParseError(source, line_no, "missing string field 'text'");
        Document doc{id->get<std::string>(), {}, text->get<std::string>()};
        if (auto title = obj.find("title"); title != obj.end() && !title->is_null()) {
            if (!title->is_string()) throw ParseError(source, line_no, "field 'title' must be a string");
            doc.title = title->get<std::string>();
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

FieldPolicy parse_field_policy(const std::string& name) {
    if (name == "text_only") return FieldPolicy::text_only;
    if (name == "title_plus_text") return FieldPolicy::title_plus_text;
    throw InvalidArgument("unknown field policy '" + name + "' (expected text_only or title_plus_text)");
}

const char* to_string(FieldPolicy policy) {
    return policy == FieldPolicy::text_only ? "text_only" : "title_plus_text";
}

}  // namespace mugi
