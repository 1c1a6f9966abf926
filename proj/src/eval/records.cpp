// SPDX-License-Identifier: Apache-2.0
#include "clozerank/eval/records.hpp"

#include "clozerank/errors.hpp"

namespace clozerank::eval {

namespace {

nlohmann::json slots_to_json(const std::vector<core::Slot>& slots) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : slots) {
        arr.push_back({{"index", s.index},
                       {"kind", core::to_string(s.kind)},
                       {"token", s.original_token},
                       {"start", s.start},
                       {"end", s.end}});
    }
    return arr;
}

std::vector<core::Slot> slots_from_json(const nlohmann::json& arr) {
    std::vector<core::Slot> slots;
    for (const auto& j : arr) {
        core::Slot s;
        s.index = j.at("index").get<size_t>();
        s.kind = core::slot_kind_from_string(j.at("kind").get<std::string>());
        s.original_token = j.at("token").get<std::string>();
        s.start = j.at("start").get<size_t>();
        s.end = j.at("end").get<size_t>();
        slots.push_back(std::move(s));
    }
    return slots;
}

nlohmann::json groups_to_json(const std::vector<std::vector<core::ItemId>>& groups) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& g : groups) arr.push_back(g);
    return arr;
}

nlohmann::json score_map_to_json(const std::map<core::ItemId, double>& m) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [k, v] : m) obj[k] = v;
    return obj;
}

}  // namespace

nlohmann::json to_json(const MaskRecord& record) {
    return {{"query_id", record.query_id},
            {"original_text", record.outcome.masked.original_text},
            {"masked_text", record.outcome.masked.masked_text},
            {"slots", slots_to_json(record.outcome.masked.slots)},
            {"warnings", record.outcome.warnings},
            {"failure", record.failure}};
}

MaskRecord mask_record_from_json(const nlohmann::json& j) {
    MaskRecord record;
    try {
        record.query_id = j.at("query_id").get<std::string>();
        record.outcome.masked.original_text = j.at("original_text").get<std::string>();
        record.outcome.masked.masked_text = j.at("masked_text").get<std::string>();
        record.outcome.masked.slots = slots_from_json(j.at("slots"));
        record.outcome.warnings = j.at("warnings").get<std::vector<std::string>>();
        record.failure = j.value("failure", "");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad masked-query record: ") + e.what());
    }
    return record;
}

nlohmann::json to_json(const core::Completion& completion) {
    return {{"query_id", completion.query_id},
            {"item_id", completion.item_id},
            {"fills", completion.fills},
            {"raw_response", completion.raw_response},
            {"warnings", completion.warnings}};
}

core::Completion completion_from_json(const nlohmann::json& j) {
    core::Completion c;
    try {
        c.query_id = j.at("query_id").get<std::string>();
        c.item_id = j.at("item_id").get<std::string>();
        c.fills = j.at("fills").get<std::vector<std::string>>();
        c.raw_response = j.at("raw_response").get<std::string>();
        c.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad completion record: ") + e.what());
    }
    return c;
}

nlohmann::json ranking_to_json(const QueryOutcome& outcome) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : outcome.final.entries) {
        entries.push_back({{"item_id", e.item_id}, {"score", e.score}});
    }
    return {{"query_id", outcome.final.query_id},
            {"head_size", outcome.final.head_size},
            {"entries", std::move(entries)}};
}

nlohmann::json trace_to_json(const QueryOutcome& outcome) {
    nlohmann::json completions = nlohmann::json::array();
    for (const auto& c : outcome.completions) {
        completions.push_back(
            {{"item_id", c.item_id}, {"fills", c.fills}, {"warnings", c.warnings}});
    }
    return {{"query_id", outcome.query.query_id},
            {"original_text", outcome.query.text},
            {"masked_text", outcome.mask.masked.masked_text},
            {"mask_warnings", outcome.mask.warnings},
            {"completions", std::move(completions)},
            {"ranking_line", outcome.trace.ranking_line},
            {"rationale", outcome.trace.rationale},
            {"groups", groups_to_json(outcome.trace.groups)},
            {"s1", score_map_to_json(outcome.trace.s1)},
            {"s2", score_map_to_json(outcome.trace.s2)},
            {"fused", score_map_to_json(outcome.trace.fused)},
            {"degenerate_all_tied", outcome.trace.degenerate_all_tied},
            {"bypass_reason", outcome.trace.bypass_reason},
            {"degrade_reason", outcome.trace.degrade_reason},
            {"failure", outcome.failure}};
}

}  // namespace clozerank::eval
