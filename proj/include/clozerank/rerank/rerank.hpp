// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "clozerank/backends/client.hpp"
#include "clozerank/core/types.hpp"
#include "clozerank/prompts.hpp"

namespace clozerank::rerank {

/// Listwise comparison prompt: original query, masked query, and one labeled
/// block per candidate completion.
struct ComparisonPrompt {
    std::vector<backends::ChatMessage> messages;
    std::vector<core::ItemId> candidate_ids;
};

ComparisonPrompt build_comparison_prompt(const core::QueryRecord& query,
                                         const core::MaskedQuery& masked,
                                         const std::vector<core::Completion>& completions,
                                         const prompts::TemplateSet& templates);

/// Parses the last `RANKING:` line into tie-groups (`>` between groups, `=`
/// within). The result must be a tie-aware permutation of expected_ids;
/// anything else raises ParseError.
core::RerankResult parse_rank_response(const std::string& response,
                                       const std::vector<core::ItemId>& expected_ids);

/// Everything worth inspecting about one query's re-rank decision.
struct RerankTrace {
    std::string ranking_line;  // verbatim line the ordering was parsed from
    std::string rationale;
    std::vector<std::vector<core::ItemId>> groups;
    std::map<core::ItemId, double> s1;
    std::map<core::ItemId, double> s2;
    std::map<core::ItemId, double> fused;
    bool degenerate_all_tied = false;
    std::string bypass_reason;   // "zero_slots" | "head_too_small" | ""
    std::string degrade_reason;  // parse/backend fallback note, "" when clean
};

struct RerankOutcome {
    core::FinalRanking final;
    RerankTrace trace;
};

/// Comparison call -> parse (one repair retry, then all-tied fallback) ->
/// decay -> fusion over the head -> merge. Zero slots or a head smaller than
/// two skips the backend call and returns the initial order with alpha1*S1
/// scores on the head.
RerankOutcome rerank_query(const core::QueryRecord& query, const core::MaskedQuery& masked,
                           const core::InitialRanking& initial,
                           const std::vector<core::Completion>& completions,
                           const core::DecayPolicy& policy, const core::FusionWeights& weights,
                           size_t top_n, bool normalize_s1, backends::ChatClient& comparator,
                           const prompts::TemplateSet& templates);

/// Offline variant: scores a head against an already-known comparator
/// ordering. rerank_query delegates here once it has groups; hyper-parameter
/// sweeps call it directly with cached groups.
RerankOutcome score_with_groups(const core::QueryRecord& query,
                                const core::InitialRanking& initial,
                                const std::vector<std::vector<core::ItemId>>& groups,
                                const core::DecayPolicy& policy,
                                const core::FusionWeights& weights, size_t top_n,
                                bool normalize_s1);

/// Restricts tie-groups to the given head ids, preserving order and dropping
/// emptied groups (used when sweeping n below the first pass's head size).
std::vector<std::vector<core::ItemId>> project_groups(
    const std::vector<std::vector<core::ItemId>>& groups,
    const std::vector<core::ItemId>& head_ids);

}  // namespace clozerank::rerank
