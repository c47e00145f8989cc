#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mugi/ranking.hpp"
#include "mugi/trec.hpp"

namespace mugi {

enum class Gain { linear, exponential };

Gain parse_gain(std::string_view name);
const char* to_string(Gain gain);

// DCG@k / IDCG@k with gain(grade) = grade (linear) or 2^grade - 1
// (exponential) and discount log2(rank + 1). Returns nullopt when the
// judgments hold no positive grade. Throws InvalidArgument for k < 1.
std::optional<double> ndcg_at_k(const Ranking& ranking, const std::map<std::string, int>& judgments,
                                std::size_t k, Gain gain = Gain::linear);
std::optional<double> ndcg_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k,
                                Gain gain = Gain::linear);

struct EvalReport {
    std::size_t k = 10;
    Gain gain = Gain::linear;
    std::map<std::string, double> per_query;
    double mean = 0.0;
    std::size_t evaluated = 0;
    // Queries in the run without any positive judgment.
    std::vector<std::string> skipped;
    std::string fingerprint;
};

// Mean nDCG@k over run queries that have positive judgments. The report
// fingerprint hashes `config_fingerprint` together with k and the gain.
EvalReport evaluate_run(std::span<const Ranking> run, const Qrels& qrels, std::size_t k,
                        Gain gain = Gain::linear, std::string_view config_fingerprint = {});

}  // namespace mugi
