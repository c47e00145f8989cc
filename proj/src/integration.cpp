#include "mugi/integration.hpp"

#include "mugi/text.hpp"

namespace mugi {
namespace {

void require_refs(std::span<const std::string> refs, const char* who) {
    if (refs.empty()) throw InvalidArgument(std::string(who) + ": at least one reference is required");
}

}  // namespace

IntegrationStrategy parse_strategy(std::string_view name) {
    if (name == "concat") return IntegrationStrategy::concat;
    if (name == "mean_pool") return IntegrationStrategy::mean_pool;
    if (name == "contex_pool") return IntegrationStrategy::contex_pool;
    throw InvalidArgument("unknown integration strategy '" + std::string(name) +
                          "' (expected concat, mean_pool or contex_pool)");
}

const char* to_string(IntegrationStrategy strategy) {
    switch (strategy) {
        case IntegrationStrategy::concat: return "concat";
        case IntegrationStrategy::mean_pool: return "mean_pool";
        case IntegrationStrategy::contex_pool: return "contex_pool";
    }
    return "?";
}

EmbeddingVector embed_concat(const EmbeddingProvider& provider, std::string_view query,
                             std::span<const std::string> refs) {
    require_refs(refs, "embed_concat");
    std::string text(query);
    for (const auto& r : refs) {
        text.push_back(' ');
        text += r;
    }
    return provider.embed(text);
}

EmbeddingVector embed_mean_pool(const EmbeddingProvider& provider, std::string_view query,
                                std::span<const std::string> refs) {
    require_refs(refs, "embed_mean_pool");
    std::vector<std::string> texts;
    texts.reserve(refs.size() + 1);
    texts.emplace_back(query);
    texts.insert(texts.end(), refs.begin(), refs.end());
    const auto vectors = provider.embed_batch(texts);
    return mean_vector<double>(vectors);
}

EmbeddingVector embed_contex_pool(const EmbeddingProvider& provider, std::string_view query,
                                  std::span<const std::string> refs) {
    require_refs(refs, "embed_contex_pool");
    std::vector<std::string> texts;
    texts.reserve(refs.size());
    for (const auto& r : refs) texts.push_back(join_with_space(query, r));
    const auto vectors = provider.embed_batch(texts);
    return mean_vector<double>(vectors);
}

EmbeddingVector embed_query(IntegrationStrategy strategy, const EmbeddingProvider& provider, std::string_view query,
                            std::span<const std::string> refs) {
    switch (strategy) {
        case IntegrationStrategy::concat: return embed_concat(provider, query, refs);
        case IntegrationStrategy::mean_pool: return embed_mean_pool(provider, query, refs);
        case IntegrationStrategy::contex_pool: return embed_contex_pool(provider, query, refs);
    }
    throw InvalidArgument("embed_query: bad strategy");
}

}  // namespace mugi
