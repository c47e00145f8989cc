#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mugi/reference_set.hpp"
#include "mugi/text.hpp"

namespace mugi {

// Query repetition scaled to the total reference length.
struct AdaptiveReweight {
    double beta = 4.0;
};

// Fixed number of query repetitions regardless of reference length.
struct ConstantRepetition {
    std::size_t times = 5;
};

struct ReweightConfig {
    std::variant<AdaptiveReweight, ConstantRepetition> strategy = AdaptiveReweight{};
    std::size_t lambda_min = 1;

    void validate() const;
};

struct SparseQuery {
    std::vector<Token> tokens;  // bag of words; order is not significant
    std::size_t query_repeats = 0;
    std::size_t num_references = 0;
};

// floor(sum_i len(r_i) / (len(q) * beta)), clamped below at lambda_min, with
// len() the tokenizer's token count. Throws InvalidArgument if beta <= 0 or
// the query has no tokens.
std::size_t compute_lambda(std::span<const std::string> references, std::string_view query,
                           double beta, std::size_t lambda_min = 1);

// The query's tokens repeated per the strategy, followed by the tokens of
// every reference. The adaptive strategy requires at least one reference.
SparseQuery build_sparse_query(std::string_view query, std::span<const std::string> references,
                               const ReweightConfig& config);
SparseQuery build_sparse_query(std::string_view query, const ReferenceSet& refs,
                               const ReweightConfig& config);

}  // namespace mugi
