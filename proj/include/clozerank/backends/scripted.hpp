// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>

#include "clozerank/backends/backend.hpp"

namespace clozerank::backends {

/// Deterministic test double. Responses are resolved in priority order:
///   1. exact message digest,
///   2. the (stage, query_id, item_id) tag the pipeline embedded,
///   3. stage-level default (stage with empty query/item ids).
/// Unresolvable requests raise a non-retryable BackendError listing the
/// attempted keys.
class ScriptedBackend : public Transport {
public:
    /// Script files are JSONL. Each record carries "response" plus either
    /// "digest" or "stage" (+ optional "query_id" / "item_id").
    static ScriptedBackend load(const std::filesystem::path& script_path);

    void add_digest(const std::string& digest, const std::string& response);
    void add_tagged(const std::string& stage, const std::string& query_id,
                    const std::string& item_id, const std::string& response);
    void add_stage_default(const std::string& stage, const std::string& response);

    std::string chat(const ChatRequest& request, const BackendConfig& config) override;

    size_t lookups() const { return lookups_.load(); }
    size_t misses() const { return misses_.load(); }

private:
    std::map<std::string, std::string> by_digest_;
    std::map<std::string, std::string> by_tag_;  // "stage\x1f qid \x1f iid"
    std::atomic<size_t> lookups_{0};
    std::atomic<size_t> misses_{0};

    static std::string tag_key(const std::string& stage, const std::string& query_id,
                               const std::string& item_id);
};

}  // namespace clozerank::backends
