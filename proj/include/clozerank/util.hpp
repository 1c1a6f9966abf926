// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace clozerank::util {

// ---- string helpers -------------------------------------------------------

std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::vector<std::string> split(std::string_view s, char sep);
bool starts_with(std::string_view s, std::string_view prefix);

/// Splits on runs of whitespace; no empty tokens.
std::vector<std::string> split_words(std::string_view s);

/// Strips quote/punctuation characters from both edges of a token
/// (ASCII quotes, backticks, brackets, sentence punctuation, asterisks).
std::string strip_edge_punct(std::string_view token);

/// Formats a double the way our JSON serializer does, so text reports and
/// JSON records render the same value identically.
std::string format_double(double v);

// ---- hashing / encoding ---------------------------------------------------

/// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

std::string base64_encode(std::string_view bytes);

// ---- files ----------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);

/// Writes via a temp file in the same directory followed by an atomic rename.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

/// Calls `fn(line_number, parsed_json)` for every non-blank line of a JSONL
/// file. Parse failures raise ValidationError naming file and line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(size_t, const nlohmann::json&)>& fn);

/// Maps an opaque identifier to a filesystem-safe file stem. Identifiers that
/// need rewriting get a short digest suffix so distinct ids cannot collide.
std::string safe_file_stem(std::string_view id);

// ---- concurrency ----------------------------------------------------------

/// Runs fn(0..count-1) across `workers` threads. The first exception raised
/// inside fn is rethrown on the calling thread after all workers join.
void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn);

}  // namespace clozerank::util
