// SPDX-License-Identifier: Apache-2.0
#include "clozerank/backends/http.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "clozerank/errors.hpp"

namespace clozerank::backends {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // leading path prefix, no trailing slash
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint_url must start with http:// or https://: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.origin = url;
    } else {
        out.origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
        while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
    }
    return out;
}

bool retryable_status(int status) {
    return status == 408 || status == 429 || status >= 500;
}

}  // namespace

nlohmann::json HttpTransport::build_body(const ChatRequest& request,
                                         const BackendConfig& config) {
    nlohmann::json body;
    body["model"] = config.model_id;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages) {
        nlohmann::json jm;
        jm["role"] = m.role;
        if (!m.image) {
            jm["content"] = m.text;
        } else {
            jm["content"] = nlohmann::json::array(
                {{{"type", "text"}, {"text", m.text}},
                 {{"type", "image_url"},
                  {"image_url",
                   {{"url", "data:" + m.image->media_type + ";base64," + m.image->base64}}}}});
        }
        body["messages"].push_back(std::move(jm));
    }
    for (const auto& [k, v] : config.determinism) body[k] = v;
    return body;
}

std::string HttpTransport::extract_content(const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("response is not JSON: ") + e.what(),
                           /*retryable=*/false);
    }
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw BackendError("response has no choices", /*retryable=*/false);
    }
    const auto& msg = j["choices"][0];
    if (msg.contains("message") && msg["message"].contains("content") &&
        msg["message"]["content"].is_string()) {
        return msg["message"]["content"].get<std::string>();
    }
    throw BackendError("response choice has no message content", /*retryable=*/false);
}

std::string HttpTransport::chat(const ChatRequest& request, const BackendConfig& config) {
    if (!config.api_key_env.empty() && std::getenv(config.api_key_env.c_str()) == nullptr) {
        throw ConfigError("backend " + config.name + ": credential variable " +
                          config.api_key_env + " is not set");
    }
    const SplitUrl url = split_url(config.endpoint_url);
    const std::string path = url.path + "/chat/completions";
    const std::string payload = build_body(request, config).dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) {
            auto delay = std::chrono::milliseconds(
                static_cast<long>(config.retry_backoff_ms * std::pow(2.0, attempt - 1)));
            std::this_thread::sleep_for(delay);
        }

        httplib::Client client(url.origin);
        client.set_connection_timeout(std::chrono::duration<double>(config.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(config.timeout_s));
        client.set_write_timeout(std::chrono::duration<double>(config.timeout_s));
        if (!config.api_key_env.empty()) {
            client.set_bearer_token_auth(std::getenv(config.api_key_env.c_str()));
        }

        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return extract_content(res->body);
        if (retryable_status(res->status)) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        throw BackendError("backend " + config.name + ": status " +
                               std::to_string(res->status) + ": " + res->body,
                           /*retryable=*/false, res->status);
    }
    throw BackendError("backend " + config.name + ": retries exhausted (" + last_error + ")",
                       /*retryable=*/true);
}

}  // namespace clozerank::backends
