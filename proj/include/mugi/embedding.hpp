#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mugi/error.hpp"
#include "mugi/generation.hpp"

namespace mugi {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using EmbeddingVector = Vector<double>;

// u.v / (|u| |v|). Throws InvalidArgument on a dimension mismatch or a zero
// vector.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& u,
                                            const Eigen::MatrixBase<DerivedB>& v) {
    using Scalar = typename DerivedA::Scalar;
    if (u.size() != v.size()) {
        throw InvalidArgument("cosine_similarity: dimension mismatch (" + std::to_string(u.size()) +
                              " vs " + std::to_string(v.size()) + ")");
    }
    const Scalar nu = u.norm();
    const Scalar nv = v.norm();
    if (nu == Scalar(0) || nv == Scalar(0)) throw InvalidArgument("cosine_similarity: zero vector");
    const Scalar c = u.dot(v) / (nu * nv);
    return std::clamp(c, Scalar(-1), Scalar(1));
}

// Text -> vector map f(.). embed() applies the provider's truncation policy
// (keep the first max_input_tokens tokens) before calling the model, so every
// implementation sees already-truncated input. Implementations must be safe
// for concurrent calls.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    // Zero when the provider does not know its output size up front.
    virtual std::size_t dimension() const = 0;
    virtual std::size_t max_input_tokens() const = 0;
    virtual bool unit_norm() const = 0;
    // Stable identifier, used in fingerprints and cache keys.
    virtual std::string name() const = 0;

    EmbeddingVector embed(std::string_view text) const;
    std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;

protected:
    virtual EmbeddingVector embed_truncated(std::string_view text) const = 0;
    virtual std::vector<EmbeddingVector> embed_truncated_batch(std::span<const std::string_view> texts) const;
};

// Deterministic bag-of-hashed-tokens embedder used for tests and offline
// experiments: each token is hashed (with `seed`) into one of `dimension`
// buckets, counts are accumulated and the result is L2-normalized.
class HashingEmbedder : public EmbeddingProvider {
public:
    // Throws InvalidArgument if dimension < 8.
    HashingEmbedder(std::size_t dimension, std::uint64_t seed, std::size_t max_input_tokens = 512);

    std::size_t dimension() const override { return dimension_; }
    std::size_t max_input_tokens() const override { return max_input_tokens_; }
    bool unit_norm() const override { return true; }
    std::string name() const override;

    std::size_t bucket(std::string_view token) const;

protected:
    // Throws InvalidArgument for text without tokens.
    EmbeddingVector embed_truncated(std::string_view text) const override;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
    std::size_t max_input_tokens_;
};

struct HttpEmbeddingConfig {
    ServiceEndpoint endpoint;            // POST {"input":[...]} -> {"embeddings":[[...]]}
    std::string model_name = "remote";  // reported by name()
    std::size_t dimension = 0;           // 0: accept whatever the service returns
    std::size_t max_input_tokens = 512;
    std::size_t batch_size = 32;
    bool unit_norm = false;
    std::chrono::milliseconds timeout{60'000};
    std::size_t max_retries = 3;
    std::chrono::milliseconds backoff_base{500};
};

// Remote embedding service speaking a minimal batched JSON protocol. Output
// order matches input order.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(HttpEmbeddingConfig config);

    std::size_t dimension() const override { return config_.dimension; }
    std::size_t max_input_tokens() const override { return config_.max_input_tokens; }
    bool unit_norm() const override { return config_.unit_norm; }
    std::string name() const override { return "http:" + config_.model_name; }

protected:
    EmbeddingVector embed_truncated(std::string_view text) const override;
    std::vector<EmbeddingVector> embed_truncated_batch(std::span<const std::string_view> texts) const override;

private:
    std::vector<EmbeddingVector> post_batch(std::span<const std::string_view> texts) const;

    HttpEmbeddingConfig config_;
};

// Memoizes another provider by (truncated) input text. Thread-safe. One
// instance lives for a run, so repeated document and reference embeddings
// are computed once.
class CachingEmbeddingProvider : public EmbeddingProvider {
public:
    explicit CachingEmbeddingProvider(const EmbeddingProvider& inner) : inner_(inner) {}

    std::size_t dimension() const override { return inner_.dimension(); }
    std::size_t max_input_tokens() const override { return inner_.max_input_tokens(); }
    bool unit_norm() const override { return inner_.unit_norm(); }
    std::string name() const override { return inner_.name(); }

    // Number of texts forwarded to the wrapped provider so far.
    std::size_t misses() const noexcept { return misses_.load(); }
    std::size_t hits() const noexcept { return hits_.load(); }

protected:
    EmbeddingVector embed_truncated(std::string_view text) const override;
    std::vector<EmbeddingVector> embed_truncated_batch(std::span<const std::string_view> texts) const override;

private:
    const EmbeddingProvider& inner_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, EmbeddingVector> memo_;
    mutable std::atomic<std::size_t> misses_{0};
    mutable std::atomic<std::size_t> hits_{0};
};

}  // namespace mugi
