// SPDX-License-Identifier: Apache-2.0
#include "clozerank/core/metrics.hpp"

#include "clozerank/errors.hpp"

namespace clozerank::core {

size_t rank_of(const FinalRanking& final, const ItemId& truth) {
    for (size_t i = 0; i < final.entries.size(); ++i) {
        if (final.entries[i].item_id == truth) return i + 1;
    }
    throw InvalidInputError("ground truth absent from ranking: " + truth +
                            " (query " + final.query_id + ")");
}

int recall_at_k(const FinalRanking& final, const ItemId& truth, size_t k) {
    if (k == 0) throw InvalidInputError("recall_at_k: k must be positive");
    return rank_of(final, truth) <= k ? 1 : 0;
}

double average_precision(const FinalRanking& final, const ItemId& truth) {
    return 1.0 / static_cast<double>(rank_of(final, truth));
}

EvalReport mean_metrics(const std::vector<std::pair<QueryId, QueryMetrics>>& per_query,
                        const std::vector<size_t>& ks) {
    if (per_query.empty()) throw InvalidInputError("mean_metrics: no queries");

    EvalReport report;
    double ap_sum = 0.0;
    std::map<size_t, size_t> hits;
    for (size_t k : ks) hits[k] = 0;

    for (const auto& [qid, m] : per_query) {
        report.per_query[qid] = m;
        ap_sum += m.average_precision;
        for (size_t k : ks) {
            if (m.rank_of_truth && *m.rank_of_truth <= k) ++hits[k];
        }
    }

    const double count = static_cast<double>(per_query.size());
    report.mean_ap = ap_sum / count;
    for (size_t k : ks) report.recall_at[k] = static_cast<double>(hits[k]) / count;
    return report;
}

}  // namespace clozerank::core
