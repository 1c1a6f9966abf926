// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "clozerank/backends/backend.hpp"

namespace clozerank::backends {

/// Chat-completions HTTP client: POSTs {model, messages} to
/// <endpoint_url>/chat/completions and returns the first choice's message
/// content. Transport errors and retryable statuses (429, 5xx) are retried
/// with exponential backoff up to max_retries; other 4xx fail immediately.
class HttpTransport : public Transport {
public:
    std::string chat(const ChatRequest& request, const BackendConfig& config) override;

    /// Request body per the chat-completions wire format. Text-only messages
    /// send plain string content; messages with an image send content parts
    /// (text + media-typed base64 image url).
    static nlohmann::json build_body(const ChatRequest& request, const BackendConfig& config);

    /// Extracts choices[0].message.content; raises BackendError on anything
    /// structurally unexpected.
    static std::string extract_content(const std::string& body);
};

}  // namespace clozerank::backends
