// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clozerank/core/types.hpp"

namespace clozerank::ingest {

/// The fully cross-validated retrieval instance: every ranking's query
/// exists, every ranked item exists in the gallery, and every ground truth
/// appears both in the gallery and in its own query's ranking.
struct Dataset {
    std::vector<core::QueryRecord> queries;
    std::map<core::ItemId, core::GalleryItem> gallery;
    std::map<core::QueryId, core::InitialRanking> rankings;
};

/// Manifest: JSONL of {query_id, text, ground_truth?}.
std::vector<core::QueryRecord> load_manifest(const std::filesystem::path& path);

/// Gallery index: JSONL of {item_id, image_path}.
std::map<core::ItemId, core::GalleryItem> load_gallery(const std::filesystem::path& path);

/// Rankings: JSONL of {query_id, ranking: [{item_id, score}, ...]} sorted
/// non-increasing by score. Unsorted input is auto-sorted with a warning; in
/// strict mode tied scores in an unsorted ranking are an error because the
/// intended order is ambiguous.
std::map<core::QueryId, core::InitialRanking> load_rankings(
    const std::filesystem::path& path, bool strict, std::vector<std::string>* warnings);

/// Cross-validates the three loaded pieces into one Dataset. Violations
/// raise ValidationError naming the identifier.
Dataset cross_validate(std::vector<core::QueryRecord> queries,
                       std::map<core::ItemId, core::GalleryItem> gallery,
                       std::map<core::QueryId, core::InitialRanking> rankings);

Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const std::filesystem::path& gallery_path,
                     const std::filesystem::path& rankings_path, bool strict,
                     std::vector<std::string>* warnings);

struct HeadTail {
    std::vector<core::ScoredItem> head;
    std::vector<core::ScoredItem> tail;
};

/// First min(n, len) entries plus the untouched remainder. Never reorders;
/// head followed by tail equals the original entries.
HeadTail top_n(const core::InitialRanking& ranking, size_t n);

/// Fetches a scored candidate list from a retriever endpoint
/// (POST {query_id, text, top_k} -> {ranking: [{item_id, score}, ...]});
/// validates and sorts it into an InitialRanking.
core::InitialRanking fetch_initial_scores(const core::QueryRecord& query,
                                          const std::string& retriever_url, size_t top_k,
                                          double timeout_s,
                                          std::vector<std::string>* warnings);

}  // namespace clozerank::ingest
