#include "mugi/reweight.hpp"

#include <algorithm>
#include <cmath>

#include "mugi/error.hpp"

namespace mugi {

void ReweightConfig::validate() const {
    if (const auto* a = std::get_if<AdaptiveReweight>(&strategy)) {
        if (!(a->beta > 0.0) || !std::isfinite(a->beta)) throw InvalidArgument("reweight: beta must be > 0");
    }
}

std::size_t compute_lambda(std::span<const std::string> references, std::string_view query, double beta,
                           std::size_t lambda_min) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("compute_lambda: beta must be > 0");
    const std::size_t query_len = token_count(query);
    if (query_len == 0) throw InvalidArgument("compute_lambda: query has no tokens");

    std::size_t total = 0;
    for (const auto& r : references) total += token_count(r);
    const double ratio = static_cast<double>(total) / (static_cast<double>(query_len) * beta);
    const auto lambda = static_cast<std::size_t>(std::floor(ratio));
    return std::max(lambda, lambda_min);
}

SparseQuery build_sparse_query(std::string_view query, std::span<const std::string> references,
                               const ReweightConfig& config) {
    config.validate();
    SparseQuery out;
    out.num_references = references.size();
    if (const auto* adaptive = std::get_if<AdaptiveReweight>(&config.strategy)) {
        if (references.empty()) throw InvalidArgument("build_sparse_query: adaptive reweighting needs references");
        out.query_repeats = compute_lambda(references, query, adaptive->beta, config.lambda_min);
    } else {
        out.query_repeats = std::get<ConstantRepetition>(config.strategy).times;
    }

    const auto query_tokens = tokenize(query);
    out.tokens.reserve(query_tokens.size() * out.query_repeats);
    for (std::size_t i = 0; i < out.query_repeats; ++i) {
        out.tokens.insert(out.tokens.end(), query_tokens.begin(), query_tokens.end());
    }
    for (const auto& r : references) {
        auto ref_tokens = tokenize(r);
        out.tokens.insert(out.tokens.end(), std::make_move_iterator(ref_tokens.begin()),
                          std::make_move_iterator(ref_tokens.end()));
    }
    return out;
}

SparseQuery build_sparse_query(std::string_view query, const ReferenceSet& refs, const ReweightConfig& config) {
    return build_sparse_query(query, std::span<const std::string>(refs.references), config);
}

}  // namespace mugi
