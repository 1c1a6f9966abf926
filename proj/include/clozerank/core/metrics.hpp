// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "clozerank/core/types.hpp"

namespace clozerank::core {

/// 1-based rank of `truth` in the final ranking.
size_t rank_of(const FinalRanking& final, const ItemId& truth);

/// 1 iff the truth's 1-based rank is <= k.
int recall_at_k(const FinalRanking& final, const ItemId& truth, size_t k);

/// Average precision under the single-relevant-item reduction: 1 / rank.
double average_precision(const FinalRanking& final, const ItemId& truth);

/// Aggregates per-query (rank, AP) pairs into Recall@K means and mAP.
EvalReport mean_metrics(const std::vector<std::pair<QueryId, QueryMetrics>>& per_query,
                        const std::vector<size_t>& ks);

}  // namespace clozerank::core
