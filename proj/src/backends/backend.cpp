// SPDX-License-Identifier: Apache-2.0
#include "clozerank/backends/backend.hpp"

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::backends {

const char* to_string(Role role) {
    switch (role) {
        case Role::kMasker: return "masker";
        case Role::kCompleter: return "completer";
        case Role::kComparator: return "comparator";
    }
    return "?";
}

void validate(const BackendConfig& config) {
    if (config.max_retries < 0) throw ConfigError("backend " + config.name + ": max_retries must be >= 0");
    if (!(config.timeout_s > 0)) throw ConfigError("backend " + config.name + ": timeout must be > 0");
    if (config.parallelism < 1) throw ConfigError("backend " + config.name + ": parallelism must be >= 1");
}

BackendConfig backend_config_from_json(const nlohmann::json& j, const std::string& section) {
    BackendConfig c;
    try {
        c.name = j.value("name", section);
        c.endpoint_url = j.value("endpoint_url", "");
        c.model_id = j.value("model_id", "");
        c.api_key_env = j.value("api_key_env", "");
        c.max_retries = j.value("max_retries", 2);
        c.timeout_s = j.value("timeout", 120.0);
        c.parallelism = j.value("parallelism", 4);
        c.retry_backoff_ms = j.value("retry_backoff_ms", 250);
        if (j.contains("determinism_settings")) {
            for (const auto& [k, v] : j.at("determinism_settings").items()) {
                c.determinism[k] = v;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("backend section '" + section + "': " + e.what());
    }
    validate(c);
    return c;
}

nlohmann::json canonical_messages(const std::vector<ChatMessage>& messages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : messages) {
        nlohmann::json jm;
        jm["role"] = m.role;
        jm["text"] = m.text;
        if (m.image) {
            jm["image"] = {{"media_type", m.image->media_type},
                           {"sha256", util::sha256_hex(m.image->base64)}};
        }
        arr.push_back(std::move(jm));
    }
    return arr;
}

std::string message_digest(const ChatRequest& request) {
    return util::sha256_hex(canonical_messages(request.messages).dump());
}

std::string cache_key(const ChatRequest& request, const BackendConfig& config) {
    nlohmann::json j;
    j["backend"] = config.name;
    j["model"] = config.model_id;
    j["determinism"] = nlohmann::json::object();
    for (const auto& [k, v] : config.determinism) j["determinism"][k] = v;
    j["messages"] = canonical_messages(request.messages);
    return util::sha256_hex(j.dump());
}

}  // namespace clozerank::backends
