// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "clozerank/core/types.hpp"

namespace clozerank::core {

/// Converts tie-groups to decay scores. Each item's position n is the number
/// of items in strictly better groups (competition ranking), so n stays in
/// [0, N-1] and tied items receive identical scores.
///
/// Exponential policy: S2 = base^n. Linear policy: S2 = max(0, 1 + n*step).
std::map<ItemId, double> decay_scores(const std::vector<std::vector<ItemId>>& groups,
                                      const DecayPolicy& policy);

/// Weighted combination S = alpha1*S1 + alpha2*S2, per item. The two maps
/// must cover the same key set; no normalization is applied.
std::map<ItemId, double> fuse_scores(const std::map<ItemId, double>& s1,
                                     const std::map<ItemId, double>& s2,
                                     const FusionWeights& weights);

/// Splices a fused head back onto the initial ranking: the head is sorted by
/// fused score descending (ties broken by initial-ranking position, earlier
/// first); entries beyond the head are preserved verbatim.
FinalRanking merge_ranking(const InitialRanking& initial,
                           const std::vector<ScoredItem>& fused_head);

/// Optional per-query min-max rescaling of initial scores to [0, 1]. A head
/// whose scores are all equal maps to the constant 0.5.
std::vector<double> min_max_normalize(const std::vector<double>& scores);

}  // namespace clozerank::core
