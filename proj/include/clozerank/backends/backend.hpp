// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace clozerank::backends {

/// The three independently configurable model roles.
enum class Role { kMasker, kCompleter, kComparator };

const char* to_string(Role role);

struct ImagePart {
    std::string media_type;  // e.g. "image/jpeg"
    std::string base64;      // payload, already encoded
};

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string text;
    std::optional<ImagePart> image;
};

/// Resolution key the pipeline embeds for the scripted backend: a stage label
/// ("mask_verb", "mask_color", "complete", "compare") plus query/item ids.
struct ScriptTag {
    std::string stage;
    std::string query_id;
    std::string item_id;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    Role target = Role::kMasker;
    ScriptTag tag;
};

struct BackendConfig {
    std::string name;
    std::string endpoint_url;  // HTTP base URL, e.g. https://host/v1
    std::string model_id;
    std::string api_key_env;  // env var holding the credential; empty = none
    int max_retries = 2;
    double timeout_s = 120.0;
    int parallelism = 4;
    int retry_backoff_ms = 250;
    // Opaque sampling / determinism controls forwarded into the request body.
    std::map<std::string, nlohmann::json> determinism;
};

void validate(const BackendConfig& config);
BackendConfig backend_config_from_json(const nlohmann::json& j, const std::string& section);

/// Canonical JSON for the message list: stable field order, image bytes
/// replaced by their digest. Identical conversations (same texts, same image
/// bytes) canonicalize identically across runs and platforms.
nlohmann::json canonical_messages(const std::vector<ChatMessage>& messages);

/// Digest over the canonical message list only (the scripted backend's exact
/// match key).
std::string message_digest(const ChatRequest& request);

/// Cache key: digest over backend name, model id, determinism settings and
/// the canonical messages.
std::string cache_key(const ChatRequest& request, const BackendConfig& config);

/// Raw one-shot transport. Retry loops live in the implementations that can
/// classify their own failures.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string chat(const ChatRequest& request, const BackendConfig& config) = 0;
};

}  // namespace clozerank::backends
