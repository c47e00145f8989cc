#include "mugi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mugi/error.hpp"
#include "mugi/fingerprint.hpp"

namespace mugi {
namespace {

double gain_of(int grade, Gain gain) {
    if (grade <= 0) return 0.0;
    return gain == Gain::linear ? static_cast<double>(grade) : std::exp2(static_cast<double>(grade)) - 1.0;
}

double discount(std::size_t rank) {  // rank is 1-based
    return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

Gain parse_gain(std::string_view name) {
    if (name == "linear") return Gain::linear;
    if (name == "exponential") return Gain::exponential;
    throw InvalidArgument("unknown gain '" + std::string(name) + "' (expected linear or exponential)");
}

const char* to_string(Gain gain) {
    return gain == Gain::linear ? "linear" : "exponential";
}

std::optional<double> ndcg_at_k(const Ranking& ranking, const std::map<std::string, int>& judgments, std::size_t k,
                                Gain gain) {
    if (k < 1) throw InvalidArgument("ndcg_at_k: k must be >= 1");

    std::vector<int> grades;
    for (const auto& [doc, grade] : judgments) {
        if (grade > 0) grades.push_back(grade);
    }
    if (grades.empty()) return std::nullopt;
    std::sort(grades.begin(), grades.end(), std::greater<>());

    double ideal = 0.0;
    for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) ideal += gain_of(grades[i], gain) * discount(i + 1);

    double dcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranking.entries.size()); ++i) {
        const auto it = judgments.find(ranking.entries[i].doc_id);
        if (it != judgments.end()) dcg += gain_of(it->second, gain) * discount(i + 1);
    }
    return std::clamp(dcg / ideal, 0.0, 1.0);
}

std::optional<double> ndcg_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k, Gain gain) {
    if (k < 1) throw InvalidArgument("ndcg_at_k: k must be >= 1");
    const auto it = qrels.find(ranking.query_id);
    if (it == qrels.end()) return std::nullopt;
    return ndcg_at_k(ranking, it->second, k, gain);
}

EvalReport evaluate_run(std::span<const Ranking> run, const Qrels& qrels, std::size_t k, Gain gain,
                        std::string_view config_fingerprint) {
    EvalReport report;
    report.k = k;
    report.gain = gain;
    double sum = 0.0;
    for (const auto& ranking : run) {
        if (const auto score = ndcg_at_k(ranking, qrels, k, gain)) {
            report.per_query[ranking.query_id] = *score;
        } else {
            report.skipped.push_back(ranking.query_id);
        }
    }
    // Sum in query-id order so the mean does not depend on run order.
    for (const auto& [qid, score] : report.per_query) sum += score;
    report.evaluated = report.per_query.size();
    report.mean = report.evaluated == 0 ? 0.0 : sum / static_cast<double>(report.evaluated);
    report.fingerprint = fingerprint_hex(std::string(config_fingerprint) + "|k=" + std::to_string(k) +
                                         "|gain=" + to_string(gain) + "|skip=no-positive");
    return report;
}

}  // namespace mugi
