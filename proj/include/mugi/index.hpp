#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mugi/corpus.hpp"
#include "mugi/text.hpp"

namespace mugi {

// Dense document number. Numbers follow ascending doc_id order, so a posting
// list sorted by number is also sorted by doc_id.
using DocNo = std::uint32_t;

struct Posting {
    DocNo doc;
    std::uint32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct CorpusStats {
    std::size_t num_docs = 0;
    double avgdl = 0.0;
    std::vector<std::uint32_t> doc_length;  // indexed by DocNo

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Immutable term -> postings index over one field of a corpus.
class InvertedIndex {
public:
    InvertedIndex() = default;

    // Throws InvalidArgument naming the first duplicated doc_id.
    static InvertedIndex build(std::span<const Document> docs,
                               FieldPolicy policy = FieldPolicy::title_plus_text);

    const CorpusStats& stats() const noexcept { return stats_; }
    std::size_t num_docs() const noexcept { return stats_.num_docs; }
    double avgdl() const noexcept { return stats_.avgdl; }
    FieldPolicy field_policy() const noexcept { return policy_; }

    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::string& doc_id(DocNo doc) const { return doc_ids_.at(doc); }
    std::optional<DocNo> find_doc(std::string_view doc_id) const;
    std::uint32_t doc_length(DocNo doc) const { return stats_.doc_length.at(doc); }

    // Zero for terms that never occur.
    std::uint32_t df(std::string_view term) const;
    std::uint32_t tf(std::string_view term, DocNo doc) const;
    std::span<const Posting> postings(std::string_view term) const;

    std::size_t num_terms() const noexcept { return postings_.size(); }
    const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings() const noexcept {
        return postings_;
    }

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    friend class IndexReader;

    FieldPolicy policy_ = FieldPolicy::title_plus_text;
    CorpusStats stats_;
    std::vector<std::string> doc_ids_;  // sorted ascending
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

// Documents in corpus order with lookup by id.
class DocumentStore {
public:
    DocumentStore() = default;
    explicit DocumentStore(std::vector<Document> docs);

    std::span<const Document> documents() const noexcept { return docs_; }
    std::size_t size() const noexcept { return docs_.size(); }
    const Document* find(std::string_view doc_id) const;
    // Throws InvalidArgument for unknown ids.
    const Document& at(std::string_view doc_id) const;

    friend bool operator==(const DocumentStore& a, const DocumentStore& b) { return a.docs_ == b.docs_; }

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

// An index together with the documents it was built from. This is what the
// `index` command persists.
struct IndexedCorpus {
    DocumentStore store;
    InvertedIndex index;

    static IndexedCorpus build(std::vector<Document> docs,
                               FieldPolicy policy = FieldPolicy::title_plus_text);

    friend bool operator==(const IndexedCorpus&, const IndexedCorpus&) = default;
};

// Single-file binary artifact. Integers are little-endian; the layout is
// private to this library but load(save(x)) == x and save is deterministic.
void save_index(const std::filesystem::path& path, const IndexedCorpus& corpus);
IndexedCorpus load_index(const std::filesystem::path& path);

}  // namespace mugi
