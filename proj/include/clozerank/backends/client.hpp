// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "clozerank/backends/backend.hpp"
#include "clozerank/backends/cache.hpp"
#include "clozerank/backends/scripted.hpp"

namespace clozerank::backends {

/// Bounds in-flight requests per backend role.
class Semaphore {
public:
    explicit Semaphore(int capacity) : available_(capacity) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return available_ > 0; });
        --available_;
    }
    void release() {
        {
            std::lock_guard lock(mutex_);
            ++available_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int available_;
};

/// Uniform, thread-safe client handle for one backend role: optional
/// persistent cache in front of the transport, parallelism bound around it.
class ChatClient {
public:
    ChatClient(BackendConfig config, std::shared_ptr<Transport> transport,
               std::shared_ptr<ResponseCache> cache = nullptr);

    /// Cache hit returns the stored text without touching the transport;
    /// a miss delegates and persists the response atomically.
    std::string chat(const ChatRequest& request);

    const BackendConfig& config() const { return config_; }
    size_t transport_calls() const { return transport_calls_.load(); }

private:
    BackendConfig config_;
    std::shared_ptr<Transport> transport_;
    std::shared_ptr<ResponseCache> cache_;
    Semaphore slots_;
    std::atomic<size_t> transport_calls_{0};
};

/// The three configured roles plus shared bookkeeping for run statistics.
struct BackendSet {
    std::shared_ptr<ChatClient> masker;
    std::shared_ptr<ChatClient> completer;
    std::shared_ptr<ChatClient> comparator;

    // Shared diagnostics; null when the corresponding feature is off.
    std::shared_ptr<ResponseCache> cache;
    std::shared_ptr<ScriptedBackend> scripted;

    ChatClient& client(Role role) const;

    /// One-line counters summary for logs (never written into report files).
    std::string stats_line() const;
};

/// Loads the three role sections ("masker", "completer", "comparator") from a
/// JSON backend config file and wires HTTP transports.
BackendSet make_http_backends(const std::filesystem::path& config_path,
                              const std::optional<std::filesystem::path>& cache_dir);

/// Wires every role to one scripted backend loaded from a script file.
BackendSet make_mock_backends(const std::filesystem::path& script_path,
                              const std::optional<std::filesystem::path>& cache_dir);

}  // namespace clozerank::backends
