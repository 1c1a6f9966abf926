// SPDX-License-Identifier: Apache-2.0
#include "clozerank/backends/client.hpp"

#include <sstream>

#include "clozerank/backends/http.hpp"
#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::backends {

namespace {

struct SlotGuard {
    explicit SlotGuard(Semaphore& s) : sem(s) { sem.acquire(); }
    ~SlotGuard() { sem.release(); }
    Semaphore& sem;
};

}  // namespace

ChatClient::ChatClient(BackendConfig config, std::shared_ptr<Transport> transport,
                       std::shared_ptr<ResponseCache> cache)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      slots_(config_.parallelism) {
    validate(config_);
}

std::string ChatClient::chat(const ChatRequest& request) {
    SlotGuard guard(slots_);
    std::string key;
    if (cache_) {
        key = cache_key(request, config_);
        if (auto hit = cache_->get(key)) return *hit;
    }
    transport_calls_.fetch_add(1);
    std::string text = transport_->chat(request, config_);
    if (cache_) cache_->put(key, text);
    return text;
}

ChatClient& BackendSet::client(Role role) const {
    switch (role) {
        case Role::kMasker: return *masker;
        case Role::kCompleter: return *completer;
        case Role::kComparator: return *comparator;
    }
    throw ConfigError("unknown backend role");
}

std::string BackendSet::stats_line() const {
    std::ostringstream out;
    out << "backend_calls=" << (masker->transport_calls() + completer->transport_calls() +
                                comparator->transport_calls());
    if (cache) out << " cache_hits=" << cache->hits() << " cache_misses=" << cache->misses();
    if (scripted) out << " scripted_lookups=" << scripted->lookups()
                      << " scripted_misses=" << scripted->misses();
    return out.str();
}

BackendSet make_http_backends(const std::filesystem::path& config_path,
                              const std::optional<std::filesystem::path>& cache_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(util::read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("backend config " + config_path.string() + ": " + e.what());
    }

    BackendSet set;
    if (cache_dir) set.cache = std::make_shared<ResponseCache>(*cache_dir);
    auto transport = std::make_shared<HttpTransport>();

    auto make_role = [&](const char* section) {
        if (!j.contains(section)) {
            throw ConfigError("backend config " + config_path.string() +
                              ": missing section '" + section + "'");
        }
        auto cfg = backend_config_from_json(j.at(section), section);
        if (cfg.endpoint_url.empty()) {
            throw ConfigError("backend config " + config_path.string() + ": section '" +
                              section + "' needs endpoint_url");
        }
        return std::make_shared<ChatClient>(std::move(cfg), transport, set.cache);
    };
    set.masker = make_role("masker");
    set.completer = make_role("completer");
    set.comparator = make_role("comparator");
    return set;
}

BackendSet make_mock_backends(const std::filesystem::path& script_path,
                              const std::optional<std::filesystem::path>& cache_dir) {
    BackendSet set;
    if (cache_dir) set.cache = std::make_shared<ResponseCache>(*cache_dir);
    set.scripted = std::make_shared<ScriptedBackend>(ScriptedBackend::load(script_path));

    auto make_role = [&](const char* name) {
        BackendConfig cfg;
        cfg.name = name;
        cfg.model_id = "scripted";
        cfg.max_retries = 0;
        cfg.parallelism = 8;
        return std::make_shared<ChatClient>(std::move(cfg), set.scripted, set.cache);
    };
    set.masker = make_role("mock-masker");
    set.completer = make_role("mock-completer");
    set.comparator = make_role("mock-comparator");
    return set;
}

}  // namespace clozerank::backends
