#include "mugi/embedding.hpp"

#include <nlohmann/json.hpp>

#include "http_client.hpp"
#include "mugi/fingerprint.hpp"
#include "mugi/text.hpp"

namespace mugi {

EmbeddingVector EmbeddingProvider::embed(std::string_view text) const {
    return embed_truncated(truncate_to_tokens(text, max_input_tokens()));
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(std::span<const std::string> texts) const {
    std::vector<std::string_view> views;
    views.reserve(texts.size());
    for (const auto& t : texts) views.push_back(truncate_to_tokens(t, max_input_tokens()));
    return embed_truncated_batch(views);
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_truncated_batch(std::span<const std::string_view> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (auto t : texts) out.push_back(embed_truncated(t));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

HashingEmbedder::HashingEmbedder(std::size_t dimension, std::uint64_t seed, std::size_t max_input_tokens)
    : dimension_(dimension), seed_(seed), max_input_tokens_(max_input_tokens) {
    if (dimension < 8) throw InvalidArgument("HashingEmbedder: dimension must be >= 8");
    if (max_input_tokens == 0) throw InvalidArgument("HashingEmbedder: max_input_tokens must be >= 1");
}

std::string HashingEmbedder::name() const {
    return "hashing:d" + std::to_string(dimension_) + ":s" + std::to_string(seed_) + ":t" +
           std::to_string(max_input_tokens_);
}

std::size_t HashingEmbedder::bucket(std::string_view token) const {
    return static_cast<std::size_t>(fnv1a64(token, splitmix64(seed_)) % dimension_);
}

EmbeddingVector HashingEmbedder::embed_truncated(std::string_view text) const {
    EmbeddingVector v = EmbeddingVector::Zero(static_cast<Eigen::Index>(dimension_));
    const auto tokens = tokenize(text);
    if (tokens.empty()) throw InvalidArgument("HashingEmbedder: text has no tokens");
    for (const auto& t : tokens) v[static_cast<Eigen::Index>(bucket(t))] += 1.0;
    v.normalize();
    return v;
}

// ---------------------------------------------------------------------------

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config) : config_(std::move(config)) {
    if (config_.endpoint.url.empty()) throw InvalidArgument("embedding service url is empty");
    if (config_.batch_size == 0) throw InvalidArgument("embedding batch size must be >= 1");
    if (config_.max_input_tokens == 0) throw InvalidArgument("max_input_tokens must be >= 1");
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::post_batch(std::span<const std::string_view> texts) const {
    nlohmann::json inputs = nlohmann::json::array();
    for (auto t : texts) inputs.push_back(std::string(t));
    const std::string body = nlohmann::json{{"input", inputs}}.dump();

    return detail::with_retries(config_.max_retries, config_.backoff_base, [&] {
        const auto res = detail::post_json(config_.endpoint, body, config_.timeout);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(res.body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ServiceError(std::string("embedding response is not JSON: ") + e.what());
        }
        const auto rows = doc.find("embeddings");
        if (rows == doc.end() || !rows->is_array() || rows->size() != texts.size()) {
            throw ServiceError("embedding response must hold one vector per input");
        }
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& row : *rows) {
            if (!row.is_array() || row.empty()) throw ServiceError("embedding response holds an empty vector");
            if (config_.dimension != 0 && row.size() != config_.dimension) {
                throw ServiceError("embedding dimension " + std::to_string(row.size()) + " != configured " +
                                   std::to_string(config_.dimension));
            }
            EmbeddingVector v(static_cast<Eigen::Index>(row.size()));
            for (std::size_t i = 0; i < row.size(); ++i) v[static_cast<Eigen::Index>(i)] = row[i].get<double>();
            out.push_back(std::move(v));
        }
        return out;
    });
}

EmbeddingVector HttpEmbeddingProvider::embed_truncated(std::string_view text) const {
    const std::string_view one[] = {text};
    return post_batch(one).front();
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_truncated_batch(std::span<const std::string_view> texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += config_.batch_size) {
        const auto chunk = texts.subspan(start, std::min(config_.batch_size, texts.size() - start));
        auto part = post_batch(chunk);
        std::move(part.begin(), part.end(), std::back_inserter(out));
    }
    return out;
}

// ---------------------------------------------------------------------------

EmbeddingVector CachingEmbeddingProvider::embed_truncated(std::string_view text) const {
    std::string key(text);
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) {
            ++hits_;
            return it->second;
        }
    }
    EmbeddingVector v = inner_.embed(text);
    ++misses_;
    std::lock_guard lock(mutex_);
    return memo_.try_emplace(std::move(key), std::move(v)).first->second;
}

std::vector<EmbeddingVector> CachingEmbeddingProvider::embed_truncated_batch(
    std::span<const std::string_view> texts) const {
    std::vector<std::string> missing;
    {
        std::lock_guard lock(mutex_);
        std::unordered_map<std::string_view, bool> queued;
        for (auto t : texts) {
            if (memo_.count(std::string(t)) == 0 && queued.emplace(t, true).second) missing.emplace_back(t);
        }
    }
    if (!missing.empty()) {
        auto vectors = inner_.embed_batch(missing);
        misses_ += missing.size();
        std::lock_guard lock(mutex_);
        for (std::size_t i = 0; i < missing.size(); ++i) memo_.try_emplace(missing[i], std::move(vectors[i]));
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::lock_guard lock(mutex_);
    for (auto t : texts) out.push_back(memo_.at(std::string(t)));
    hits_ += texts.size() - missing.size();
    return out;
}

}  // namespace mugi
