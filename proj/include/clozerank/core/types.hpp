// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clozerank::core {

using QueryId = std::string;
using ItemId = std::string;

/// Reserved completion fill marking an abstention.
inline constexpr const char* kUnknown = "UNKNOWN";

/// Placeholder literals substituted into masked queries.
inline constexpr const char* kVerbPlaceholder = "<VERB>";
inline constexpr const char* kColorPlaceholder = "<COLOR>";

struct QueryRecord {
    QueryId query_id;
    std::string text;
    std::optional<ItemId> ground_truth_id;
};

struct GalleryItem {
    ItemId item_id;
    std::string image_ref;  // filesystem path or URL
};

struct ScoredItem {
    ItemId item_id;
    double score;

    bool operator==(const ScoredItem&) const = default;
};

/// Coarse retriever output: entries sorted non-increasing by score, unique
/// item ids, never empty.
struct InitialRanking {
    QueryId query_id;
    std::vector<ScoredItem> entries;
};

enum class SlotKind { kVerb, kColor };

const char* to_string(SlotKind kind);
SlotKind slot_kind_from_string(const std::string& s);

/// One placeholder instance: the exact word sequence removed from the query
/// and its character span in the original text.
struct Slot {
    size_t index = 0;  // 0-based, reading order among all slots
    SlotKind kind = SlotKind::kVerb;
    std::string original_token;
    size_t start = 0;  // [start, end) offsets into the original text
    size_t end = 0;

    bool operator==(const Slot&) const = default;
};

struct MaskedQuery {
    std::string original_text;
    std::string masked_text;
    std::vector<Slot> slots;  // sorted by span start

    bool zero_slots() const { return slots.empty(); }
};

/// Per-candidate slot fills. |fills| always equals |slots| of the associated
/// MaskedQuery; kUnknown is the only reserved fill value.
struct Completion {
    QueryId query_id;
    ItemId item_id;
    std::vector<std::string> fills;
    std::string raw_response;
    std::vector<std::string> warnings;
};

/// Rank-to-score conversion for the comparator's ordering.
struct DecayPolicy {
    enum class Kind { kExponential, kLinear };

    Kind kind = Kind::kExponential;
    double base = 0.5;   // beta, used when kind == kExponential; 0 < base < 1
    double step = -0.2;  // d, used when kind == kLinear; step < 0

    static DecayPolicy exponential(double beta) {
        return {Kind::kExponential, beta, -0.2};
    }
    static DecayPolicy linear(double d) { return {Kind::kLinear, 0.5, d}; }
};

void validate(const DecayPolicy& policy);

/// Weights of the two ranked lists in the fused score.
struct FusionWeights {
    double alpha1 = 1.0;
    double alpha2 = 0.075;
};

void validate(const FusionWeights& weights);

/// Tie-aware ordering over the compared candidates, best group first. The
/// groups partition exactly the candidate ids handed to the comparator.
struct RerankResult {
    QueryId query_id;
    std::vector<std::vector<ItemId>> groups;
    std::string rationale;
    bool degenerate_all_tied = false;
};

/// Fused head spliced onto the untouched tail of the initial ranking.
struct FinalRanking {
    QueryId query_id;
    std::vector<ScoredItem> entries;
    size_t head_size = 0;
};

struct QueryMetrics {
    std::optional<size_t> rank_of_truth;  // 1-based
    double average_precision = 0.0;
};

struct EvalReport {
    std::map<QueryId, QueryMetrics> per_query;
    std::map<size_t, double> recall_at;
    double mean_ap = 0.0;
    std::map<std::string, std::string> config_echo;
};

}  // namespace clozerank::core
