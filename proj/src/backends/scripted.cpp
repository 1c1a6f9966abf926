// SPDX-License-Identifier: Apache-2.0
#include "clozerank/backends/scripted.hpp"

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::backends {

std::string ScriptedBackend::tag_key(const std::string& stage, const std::string& query_id,
                                     const std::string& item_id) {
    return stage + '\x1f' + query_id + '\x1f' + item_id;
}

ScriptedBackend ScriptedBackend::load(const std::filesystem::path& script_path) {
    ScriptedBackend backend;
    util::for_each_jsonl(script_path, [&](size_t lineno, const nlohmann::json& rec) {
        if (!rec.contains("response") || !rec.at("response").is_string()) {
            throw ValidationError(script_path.string() + ":" + std::to_string(lineno) +
                                  ": script record needs a string \"response\"");
        }
        const std::string response = rec.at("response").get<std::string>();
        if (rec.contains("digest")) {
            backend.add_digest(rec.at("digest").get<std::string>(), response);
            return;
        }
        if (!rec.contains("stage")) {
            throw ValidationError(script_path.string() + ":" + std::to_string(lineno) +
                                  ": script record needs \"digest\" or \"stage\"");
        }
        backend.add_tagged(rec.at("stage").get<std::string>(), rec.value("query_id", ""),
                           rec.value("item_id", ""), response);
    });
    return backend;
}

void ScriptedBackend::add_digest(const std::string& digest, const std::string& response) {
    by_digest_[digest] = response;
}

void ScriptedBackend::add_tagged(const std::string& stage, const std::string& query_id,
                                 const std::string& item_id, const std::string& response) {
    by_tag_[tag_key(stage, query_id, item_id)] = response;
}

void ScriptedBackend::add_stage_default(const std::string& stage, const std::string& response) {
    add_tagged(stage, "", "", response);
}

std::string ScriptedBackend::chat(const ChatRequest& request, const BackendConfig&) {
    lookups_.fetch_add(1);

    const std::string digest = message_digest(request);
    if (auto it = by_digest_.find(digest); it != by_digest_.end()) return it->second;

    const auto& tag = request.tag;
    if (auto it = by_tag_.find(tag_key(tag.stage, tag.query_id, tag.item_id));
        it != by_tag_.end())
        return it->second;
    if (auto it = by_tag_.find(tag_key(tag.stage, "", "")); it != by_tag_.end())
        return it->second;

    misses_.fetch_add(1);
    throw BackendError("scripted backend: no response for digest=" + digest + " stage=" +
                           tag.stage + " query_id=" + tag.query_id + " item_id=" + tag.item_id,
                       /*retryable=*/false);
}

}  // namespace clozerank::backends
