#include "mugi/index.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <numeric>

#include "mugi/error.hpp"

namespace mugi {

InvertedIndex InvertedIndex::build(std::span<const Document> docs, FieldPolicy policy) {
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return docs[a].doc_id < docs[b].doc_id; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (docs[order[i]].doc_id == docs[order[i - 1]].doc_id) {
            throw InvalidArgument("duplicate doc_id '" + docs[order[i]].doc_id + "'");
        }
    }

    InvertedIndex index;
    index.policy_ = policy;
    index.stats_.num_docs = docs.size();
    index.stats_.doc_length.resize(docs.size());
    index.doc_ids_.reserve(docs.size());

    std::uint64_t total_length = 0;
    std::map<std::string, std::uint32_t, std::less<>> tf;
    for (DocNo no = 0; no < order.size(); ++no) {
        const Document& doc = docs[order[no]];
        index.doc_ids_.push_back(doc.doc_id);
        const auto tokens = tokenize(document_text(doc, policy));
        index.stats_.doc_length[no] = static_cast<std::uint32_t>(tokens.size());
        total_length += tokens.size();

        tf.clear();
        for (const auto& t : tokens) ++tf[t];
        // Doc numbers increase monotonically, so appending keeps postings sorted.
        for (const auto& [term, count] : tf) index.postings_[term].push_back(Posting{no, count});
    }
    index.stats_.avgdl = docs.empty() ? 0.0 : static_cast<double>(total_length) / static_cast<double>(docs.size());
    return index;
}

std::optional<DocNo> InvertedIndex::find_doc(std::string_view doc_id) const {
    auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id);
    if (it == doc_ids_.end() || *it != doc_id) return std::nullopt;
    return static_cast<DocNo>(it - doc_ids_.begin());
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
    auto it = postings_.find(term);
    if (it == postings_.end()) return {};
    return it->second;
}

std::uint32_t InvertedIndex::df(std::string_view term) const {
    return static_cast<std::uint32_t>(postings(term).size());
}

std::uint32_t InvertedIndex::tf(std::string_view term, DocNo doc) const {
    auto list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, DocNo d) { return p.doc < d; });
    return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

DocumentStore::DocumentStore(std::vector<Document> docs) : docs_(std::move(docs)) {
    by_id_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        if (!by_id_.emplace(docs_[i].doc_id, i).second) {
            throw InvalidArgument("duplicate doc_id '" + docs_[i].doc_id + "'");
        }
    }
}

const Document* DocumentStore::find(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& DocumentStore::at(std::string_view doc_id) const {
    if (const Document* d = find(doc_id)) return *d;
    throw InvalidArgument("unknown doc_id '" + std::string(doc_id) + "'");
}

IndexedCorpus IndexedCorpus::build(std::vector<Document> docs, FieldPolicy policy) {
    InvertedIndex index = InvertedIndex::build(docs, policy);
    return IndexedCorpus{DocumentStore(std::move(docs)), std::move(index)};
}

// ---------------------------------------------------------------------------
// Binary artifact

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'U', 'G', 'I', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void str(std::string_view s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ostream& out_;
};

}  // namespace

class IndexReader {
public:
    IndexReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    IndexedCorpus read() {
        std::array<char, 8> magic{};
        bytes(magic.data(), magic.size());
        if (magic != kMagic) fail("not a mugi index file");
        if (u32() != kFormatVersion) fail("unsupported index format version");

        const std::uint8_t policy = u8();
        if (policy > 1) fail("bad field policy");

        std::vector<Document> docs(count());
        for (auto& d : docs) {
            d.doc_id = str();
            d.title = str();
            d.text = str();
        }

        InvertedIndex index;
        index.policy_ = policy == 0 ? FieldPolicy::text_only : FieldPolicy::title_plus_text;
        index.stats_.num_docs = count();
        index.stats_.avgdl = f64();
        index.stats_.doc_length.resize(index.stats_.num_docs);
        index.doc_ids_.resize(index.stats_.num_docs);
        for (std::size_t i = 0; i < index.stats_.num_docs; ++i) {
            index.doc_ids_[i] = str();
            index.stats_.doc_length[i] = u32();
        }
        const std::size_t num_terms = count();
        for (std::size_t t = 0; t < num_terms; ++t) {
            std::string term = str();
            std::vector<Posting> list(count());
            for (auto& p : list) {
                p.doc = u32();
                p.tf = u32();
                if (p.doc >= index.stats_.num_docs) fail("posting references unknown document");
            }
            index.postings_.emplace_hint(index.postings_.end(), std::move(term), std::move(list));
        }
        if (in_.peek() != std::char_traits<char>::eof()) fail("trailing bytes");
        if (docs.size() != index.stats_.num_docs) fail("document count mismatch");
        return IndexedCorpus{DocumentStore(std::move(docs)), std::move(index)};
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        throw IoError(source_ + ": corrupt index (" + what + ")");
    }
    void bytes(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) fail("unexpected end of file");
    }
    std::uint8_t u8() {
        char c;
        bytes(&c, 1);
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::size_t count() {
        const std::uint64_t n = u64();
        if (n > (std::uint64_t{1} << 32)) fail("implausible element count");
        return static_cast<std::size_t>(n);
    }
    std::string str() {
        std::string s(count(), '\0');
        if (!s.empty()) bytes(s.data(), s.size());
        return s;
    }

    std::istream& in_;
    std::string source_;
};

void save_index(const std::filesystem::path& path, const IndexedCorpus& corpus) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write index file " + path.string());
    Writer w(out);
    const InvertedIndex& index = corpus.index;

    out.write(kMagic.data(), kMagic.size());
    w.u32(kFormatVersion);
    w.u8(index.field_policy() == FieldPolicy::text_only ? 0 : 1);

    const auto docs = corpus.store.documents();
    w.u64(docs.size());
    for (const auto& d : docs) {
        w.str(d.doc_id);
        w.str(d.title);
        w.str(d.text);
    }

    w.u64(index.num_docs());
    w.f64(index.avgdl());
    for (DocNo i = 0; i < index.num_docs(); ++i) {
        w.str(index.doc_id(i));
        w.u32(index.doc_length(i));
    }
    w.u64(index.num_terms());
    for (const auto& [term, list] : index.all_postings()) {
        w.str(term);
        w.u64(list.size());
        for (const auto& p : list) {
            w.u32(p.doc);
            w.u32(p.tf);
        }
    }
    if (!out) throw IoError("failed writing index file " + path.string());
}

IndexedCorpus load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index file " + path.string());
    return IndexReader(in, path.string()).read();
}

}  // namespace mugi
