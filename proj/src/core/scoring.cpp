// SPDX-License-Identifier: Apache-2.0
#include "clozerank/core/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "clozerank/errors.hpp"

namespace clozerank::core {

const char* to_string(SlotKind kind) {
    return kind == SlotKind::kVerb ? "VERB" : "COLOR";
}

SlotKind slot_kind_from_string(const std::string& s) {
    if (s == "VERB") return SlotKind::kVerb;
    if (s == "COLOR") return SlotKind::kColor;
    throw InvalidInputError("unknown slot kind: " + s);
}

void validate(const DecayPolicy& policy) {
    if (policy.kind == DecayPolicy::Kind::kExponential) {
        if (!(policy.base > 0.0 && policy.base < 1.0)) {
            throw InvalidInputError("exponential decay requires 0 < base < 1, got " +
                                    std::to_string(policy.base));
        }
    } else {
        if (!(policy.step < 0.0)) {
            throw InvalidInputError("linear decay requires step < 0, got " +
                                    std::to_string(policy.step));
        }
    }
}

void validate(const FusionWeights& weights) {
    if (weights.alpha1 < 0.0 || weights.alpha2 < 0.0) {
        throw InvalidInputError("fusion weights must be non-negative");
    }
    if (weights.alpha1 == 0.0 && weights.alpha2 == 0.0) {
        throw InvalidInputError("fusion weights must not both be zero");
    }
}

std::map<ItemId, double> decay_scores(const std::vector<std::vector<ItemId>>& groups,
                                      const DecayPolicy& policy) {
    validate(policy);
    if (groups.empty()) throw InvalidInputError("decay_scores: empty groups list");

    std::map<ItemId, double> out;
    size_t position = 0;  // count of items in strictly better groups
    for (const auto& group : groups) {
        if (group.empty()) throw InvalidInputError("decay_scores: empty tie-group");
        double score;
        if (policy.kind == DecayPolicy::Kind::kExponential) {
            score = std::pow(policy.base, static_cast<double>(position));
        } else {
            score = std::max(0.0, 1.0 + static_cast<double>(position) * policy.step);
        }
        for (const auto& id : group) {
            if (!out.emplace(id, score).second) {
                throw InvalidInputError("decay_scores: duplicate item id: " + id);
            }
        }
        position += group.size();
    }
    return out;
}

std::map<ItemId, double> fuse_scores(const std::map<ItemId, double>& s1,
                                     const std::map<ItemId, double>& s2,
                                     const FusionWeights& weights) {
    validate(weights);
    if (s1.size() != s2.size()) {
        throw InvalidInputError("fuse_scores: key-set size mismatch");
    }
    std::map<ItemId, double> out;
    for (const auto& [id, v1] : s1) {
        auto it = s2.find(id);
        if (it == s2.end()) {
            throw InvalidInputError("fuse_scores: key missing from s2: " + id);
        }
        out.emplace(id, weights.alpha1 * v1 + weights.alpha2 * it->second);
    }
    return out;
}

FinalRanking merge_ranking(const InitialRanking& initial,
                           const std::vector<ScoredItem>& fused_head) {
    const size_t n = fused_head.size();
    if (n > initial.entries.size()) {
        throw InvalidInputError("merge_ranking: head larger than initial ranking");
    }

    std::unordered_map<ItemId, size_t> initial_pos;
    for (size_t i = 0; i < n; ++i) initial_pos.emplace(initial.entries[i].item_id, i);

    std::vector<ScoredItem> head = fused_head;
    for (const auto& entry : head) {
        if (initial_pos.find(entry.item_id) == initial_pos.end()) {
            throw InvalidInputError("merge_ranking: head id not in initial head: " +
                                    entry.item_id);
        }
    }
    if (initial_pos.size() != head.size()) {
        throw InvalidInputError("merge_ranking: head/initial id mismatch");
    }

    std::stable_sort(head.begin(), head.end(),
                     [&](const ScoredItem& a, const ScoredItem& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return initial_pos.at(a.item_id) < initial_pos.at(b.item_id);
                     });

    FinalRanking final;
    final.query_id = initial.query_id;
    final.head_size = n;
    final.entries = std::move(head);
    final.entries.insert(final.entries.end(), initial.entries.begin() + static_cast<long>(n),
                         initial.entries.end());
    return final;
}

std::vector<double> min_max_normalize(const std::vector<double>& scores) {
    if (scores.empty()) return {};
    auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    if (*mn == *mx) {
        std::fill(out.begin(), out.end(), 0.5);
        return out;
    }
    for (size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - *mn) / (*mx - *mn);
    return out;
}

}  // namespace clozerank::core
