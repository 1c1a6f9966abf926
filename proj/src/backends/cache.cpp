// SPDX-License-Identifier: Apache-2.0
#include "clozerank/backends/cache.hpp"

#include <chrono>
#include <cstdio>

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::backends {

namespace {

constexpr const char* kMagic = "clozerank-cache v1";

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::optional<std::string> ResponseCache::get(const std::string& key) {
    const auto path = dir_ / key;
    if (!std::filesystem::exists(path)) {
        misses_.fetch_add(1);
        return std::nullopt;
    }
    std::string content;
    try {
        content = util::read_file(path);
    } catch (const Error&) {
        misses_.fetch_add(1);
        return std::nullopt;
    }
    auto nl = content.find('\n');
    if (nl == std::string::npos || !util::starts_with(content, kMagic)) {
        std::fprintf(stderr, "warning: corrupt cache entry %s, treating as miss\n",
                     path.string().c_str());
        misses_.fetch_add(1);
        return std::nullopt;
    }
    // Header: "<magic> <key> <created_at>"
    const std::string header = content.substr(0, nl);
    if (header.find(key) == std::string::npos) {
        std::fprintf(stderr, "warning: cache entry %s names a different key, treating as miss\n",
                     path.string().c_str());
        misses_.fetch_add(1);
        return std::nullopt;
    }
    hits_.fetch_add(1);
    return content.substr(nl + 1);
}

void ResponseCache::put(const std::string& key, const std::string& response_text) {
    std::string content = std::string(kMagic) + " " + key + " " + now_iso8601() + "\n";
    content += response_text;
    util::atomic_write_file(dir_ / key, content);
}

}  // namespace clozerank::backends
