// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "clozerank/cloze/cloze.hpp"
#include "clozerank/core/types.hpp"
#include "clozerank/rerank/rerank.hpp"

namespace clozerank::eval {

/// One query's masking stage result as staged to disk (masked.jsonl).
struct MaskRecord {
    core::QueryId query_id;
    cloze::MaskOutcome outcome;
    std::string failure;  // non-empty when the stage degraded for this query
};

nlohmann::json to_json(const MaskRecord& record);
MaskRecord mask_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const core::Completion& completion);
core::Completion completion_from_json(const nlohmann::json& j);

/// Everything recorded for one query after re-ranking.
struct QueryOutcome {
    core::QueryRecord query;
    cloze::MaskOutcome mask;
    std::vector<core::Completion> completions;
    rerank::RerankTrace trace;
    core::FinalRanking final;
    std::string failure;
};

nlohmann::json ranking_to_json(const QueryOutcome& outcome);
nlohmann::json trace_to_json(const QueryOutcome& outcome);

}  // namespace clozerank::eval
