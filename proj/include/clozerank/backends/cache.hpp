// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>

namespace clozerank::backends {

/// Content-addressed response cache: one file per key, filename = hex digest,
/// content = one metadata header line followed by the raw response text.
/// Writes go through a temp file + rename, so concurrent writers of the same
/// key converge to one intact entry. Corrupt entries read as misses and are
/// overwritten on the next store.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key);
    void put(const std::string& key, const std::string& response_text);

    size_t hits() const { return hits_.load(); }
    size_t misses() const { return misses_.load(); }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::atomic<size_t> hits_{0};
    std::atomic<size_t> misses_{0};
};

}  // namespace clozerank::backends
