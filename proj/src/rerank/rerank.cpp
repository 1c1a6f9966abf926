// SPDX-License-Identifier: Apache-2.0
#include "clozerank/rerank/rerank.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "clozerank/core/scoring.hpp"
#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::rerank {

namespace {

constexpr const char* kRankingMarker = "RANKING:";

constexpr const char* kRepairInstruction =
    "Your previous answer did not contain a valid RANKING line. Answer again with "
    "exactly one line starting with \"RANKING:\" that lists every candidate id exactly "
    "once, from best to worst, separated by \">\" (strictly better) or \"=\" (tied).";

/// Last response line carrying the RANKING marker; empty string when absent.
std::string find_ranking_line(const std::string& response) {
    std::string found;
    for (const auto& line : util::split_lines(response)) {
        if (line.find(kRankingMarker) != std::string::npos) found = line;
    }
    return found;
}

std::string normalize_label(const std::string& raw,
                            const std::set<core::ItemId>& expected) {
    std::string label = util::trim(raw);
    if (expected.count(label)) return label;
    return util::strip_edge_punct(label);
}

}  // namespace

ComparisonPrompt build_comparison_prompt(const core::QueryRecord& query,
                                         const core::MaskedQuery& masked,
                                         const std::vector<core::Completion>& completions,
                                         const prompts::TemplateSet& templates) {
    if (completions.size() < 2) {
        throw InvalidInputError("build_comparison_prompt: need at least 2 completions");
    }

    ComparisonPrompt prompt;
    std::ostringstream candidates;
    std::set<core::ItemId> seen;
    for (size_t c = 0; c < completions.size(); ++c) {
        const auto& comp = completions[c];
        if (comp.fills.size() != masked.slots.size()) {
            throw InvalidInputError("completion for " + comp.item_id +
                                    " has wrong fill count");
        }
        if (!seen.insert(comp.item_id).second) {
            throw InvalidInputError("duplicate completion for " + comp.item_id);
        }
        prompt.candidate_ids.push_back(comp.item_id);
        if (c) candidates << "\n\n";
        candidates << "CANDIDATE " << comp.item_id << ":";
        for (size_t i = 0; i < comp.fills.size(); ++i) {
            candidates << "\nSLOT " << i << " (" << core::to_string(masked.slots[i].kind)
                       << "): " << comp.fills[i];
        }
    }

    prompt.messages.push_back(
        {"user",
         prompts::interpolate(templates.comparison, {{"query", query.text},
                                                     {"masked_query", masked.masked_text},
                                                     {"candidates", candidates.str()}}),
         {}});
    return prompt;
}

core::RerankResult parse_rank_response(const std::string& response,
                                       const std::vector<core::ItemId>& expected_ids) {
    const std::string line = find_ranking_line(response);
    if (line.empty()) throw ParseError("no RANKING line in response");

    const std::set<core::ItemId> expected(expected_ids.begin(), expected_ids.end());
    const std::string payload = line.substr(line.find(kRankingMarker) +
                                            std::string(kRankingMarker).size());

    core::RerankResult result;
    std::set<core::ItemId> used;
    for (const auto& group_str : util::split(payload, '>')) {
        std::vector<core::ItemId> group;
        for (const auto& label_str : util::split(group_str, '=')) {
            const std::string id = normalize_label(label_str, expected);
            if (id.empty()) throw ParseError("empty candidate label in RANKING line");
            if (!expected.count(id)) throw ParseError("unknown candidate id: " + id);
            if (!used.insert(id).second) throw ParseError("duplicate candidate id: " + id);
            group.push_back(id);
        }
        result.groups.push_back(std::move(group));
    }
    if (used.size() != expected.size()) {
        for (const auto& id : expected_ids) {
            if (!used.count(id)) throw ParseError("candidate id missing from RANKING: " + id);
        }
    }

    result.degenerate_all_tied = result.groups.size() == 1;

    // Rationale: whatever follows the (last) ranking line.
    const auto lines = util::split_lines(response);
    size_t last_marker = lines.size();
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(kRankingMarker) != std::string::npos) last_marker = i;
    }
    std::string rationale;
    for (size_t i = last_marker + 1; i < lines.size(); ++i) {
        if (!rationale.empty()) rationale += '\n';
        rationale += lines[i];
    }
    result.rationale = util::trim(rationale);
    return result;
}

std::vector<std::vector<core::ItemId>> project_groups(
    const std::vector<std::vector<core::ItemId>>& groups,
    const std::vector<core::ItemId>& head_ids) {
    const std::set<core::ItemId> keep(head_ids.begin(), head_ids.end());
    std::vector<std::vector<core::ItemId>> out;
    for (const auto& group : groups) {
        std::vector<core::ItemId> filtered;
        for (const auto& id : group) {
            if (keep.count(id)) filtered.push_back(id);
        }
        if (!filtered.empty()) out.push_back(std::move(filtered));
    }
    return out;
}

RerankOutcome score_with_groups(const core::QueryRecord& query,
                                const core::InitialRanking& initial,
                                const std::vector<std::vector<core::ItemId>>& groups,
                                const core::DecayPolicy& policy,
                                const core::FusionWeights& weights, size_t top_n,
                                bool normalize_s1) {
    const size_t head_n = std::min(top_n, initial.entries.size());

    RerankOutcome outcome;
    std::vector<double> head_scores;
    head_scores.reserve(head_n);
    for (size_t i = 0; i < head_n; ++i) head_scores.push_back(initial.entries[i].score);
    if (normalize_s1) head_scores = core::min_max_normalize(head_scores);

    std::map<core::ItemId, double> s1;
    for (size_t i = 0; i < head_n; ++i) s1.emplace(initial.entries[i].item_id, head_scores[i]);
    outcome.trace.s1 = s1;

    std::vector<core::ScoredItem> fused_head;
    fused_head.reserve(head_n);
    if (groups.empty()) {
        // Bypass: initial order with alpha1*S1 on the head.
        for (size_t i = 0; i < head_n; ++i) {
            fused_head.push_back({initial.entries[i].item_id,
                                  weights.alpha1 * head_scores[i]});
        }
        for (const auto& entry : fused_head) outcome.trace.fused[entry.item_id] = entry.score;
    } else {
        outcome.trace.groups = groups;
        outcome.trace.degenerate_all_tied = groups.size() == 1;
        auto s2 = core::decay_scores(groups, policy);
        outcome.trace.s2 = s2;
        auto fused = core::fuse_scores(s1, s2, weights);
        outcome.trace.fused = fused;
        for (size_t i = 0; i < head_n; ++i) {
            const auto& id = initial.entries[i].item_id;
            fused_head.push_back({id, fused.at(id)});
        }
    }

    outcome.final = core::merge_ranking(initial, fused_head);
    (void)query;
    return outcome;
}

RerankOutcome rerank_query(const core::QueryRecord& query, const core::MaskedQuery& masked,
                           const core::InitialRanking& initial,
                           const std::vector<core::Completion>& completions,
                           const core::DecayPolicy& policy, const core::FusionWeights& weights,
                           size_t top_n, bool normalize_s1, backends::ChatClient& comparator,
                           const prompts::TemplateSet& templates) {
    const size_t head_n = std::min(top_n, initial.entries.size());

    if (masked.zero_slots() || head_n < 2) {
        auto outcome = score_with_groups(query, initial, {}, policy, weights, top_n,
                                         normalize_s1);
        outcome.trace.bypass_reason = masked.zero_slots() ? "zero_slots" : "head_too_small";
        return outcome;
    }
    if (completions.size() != head_n) {
        throw InvalidInputError("rerank_query: expected " + std::to_string(head_n) +
                                " completions, got " + std::to_string(completions.size()));
    }

    std::vector<core::ItemId> head_ids;
    for (size_t i = 0; i < head_n; ++i) head_ids.push_back(initial.entries[i].item_id);

    const ComparisonPrompt prompt = build_comparison_prompt(query, masked, completions,
                                                            templates);
    backends::ChatRequest request;
    request.messages = prompt.messages;
    request.target = backends::Role::kComparator;
    request.tag = {"compare", query.query_id, ""};

    core::RerankResult parsed;
    std::string ranking_line;
    std::string degrade;
    bool have_result = false;
    try {
        const std::string response = comparator.chat(request);
        try {
            parsed = parse_rank_response(response, head_ids);
            ranking_line = find_ranking_line(response);
            have_result = true;
        } catch (const ParseError& first_error) {
            backends::ChatRequest retry = request;
            retry.messages.push_back({"assistant", response, {}});
            retry.messages.push_back({"user", kRepairInstruction, {}});
            const std::string second = comparator.chat(retry);
            try {
                parsed = parse_rank_response(second, head_ids);
                ranking_line = find_ranking_line(second);
                have_result = true;
            } catch (const ParseError& second_error) {
                degrade = std::string("parse_fallback: ") + second_error.what();
            }
        }
    } catch (const Error& e) {
        degrade = std::string("backend_error: ") + e.what();
    }

    std::vector<std::vector<core::ItemId>> groups;
    if (have_result) {
        parsed.query_id = query.query_id;
        groups = parsed.groups;
    } else {
        groups.push_back(head_ids);  // all-tied fallback leans on the initial ranking
    }

    auto outcome = score_with_groups(query, initial, groups, policy, weights, top_n,
                                     normalize_s1);
    outcome.trace.ranking_line = ranking_line;
    outcome.trace.rationale = have_result ? parsed.rationale : "";
    outcome.trace.degrade_reason = degrade;
    return outcome;
}

}  // namespace clozerank::rerank
