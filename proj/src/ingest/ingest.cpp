// SPDX-License-Identifier: Apache-2.0
#include "clozerank/ingest/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::ingest {

namespace {

std::string at(const std::filesystem::path& path, size_t lineno) {
    return path.string() + ":" + std::to_string(lineno) + ": ";
}

/// Shared ranking validation for file and retriever sources. `where` names
/// the source for error messages.
core::InitialRanking validate_ranking(core::InitialRanking ranking, const std::string& where,
                                      bool strict, std::vector<std::string>* warnings) {
    if (ranking.entries.empty()) {
        throw ValidationError(where + "ranking for query '" + ranking.query_id +
                              "' is empty");
    }
    std::set<core::ItemId> seen;
    for (const auto& entry : ranking.entries) {
        if (entry.item_id.empty()) {
            throw ValidationError(where + "ranking for query '" + ranking.query_id +
                                  "' has an empty item_id");
        }
        if (!std::isfinite(entry.score)) {
            throw ValidationError(where + "ranking for query '" + ranking.query_id +
                                  "' has a non-finite score for item '" + entry.item_id + "'");
        }
        if (!seen.insert(entry.item_id).second) {
            throw ValidationError(where + "duplicate item '" + entry.item_id +
                                  "' in ranking for query '" + ranking.query_id + "'");
        }
    }

    const bool sorted = std::is_sorted(
        ranking.entries.begin(), ranking.entries.end(),
        [](const core::ScoredItem& a, const core::ScoredItem& b) { return a.score > b.score; });
    if (!sorted) {
        bool has_ties = false;
        std::set<double> distinct;
        for (const auto& e : ranking.entries) {
            if (!distinct.insert(e.score).second) has_ties = true;
        }
        if (has_ties && strict) {
            throw ValidationError(where + "ranking for query '" + ranking.query_id +
                                  "' is unsorted and has tied scores; order is ambiguous");
        }
        std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                         [](const core::ScoredItem& a, const core::ScoredItem& b) {
                             return a.score > b.score;
                         });
        if (warnings) {
            warnings->push_back(where + "ranking for query '" + ranking.query_id +
                                "' was unsorted; auto-sorted by score");
        }
    }
    return ranking;
}

}  // namespace

std::vector<core::QueryRecord> load_manifest(const std::filesystem::path& path) {
    std::vector<core::QueryRecord> queries;
    std::set<core::QueryId> seen;
    util::for_each_jsonl(path, [&](size_t lineno, const nlohmann::json& rec) {
        core::QueryRecord q;
        try {
            q.query_id = rec.at("query_id").get<std::string>();
            q.text = rec.at("text").get<std::string>();
            if (rec.contains("ground_truth") && !rec.at("ground_truth").is_null()) {
                q.ground_truth_id = rec.at("ground_truth").get<std::string>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(at(path, lineno) + e.what());
        }
        if (q.query_id.empty()) throw ValidationError(at(path, lineno) + "empty query_id");
        if (util::trim(q.text).empty()) {
            throw ValidationError(at(path, lineno) + "query '" + q.query_id +
                                  "' has empty text");
        }
        if (!seen.insert(q.query_id).second) {
            throw ValidationError(at(path, lineno) + "duplicate query_id '" + q.query_id + "'");
        }
        queries.push_back(std::move(q));
    });
    if (queries.empty()) throw ValidationError(path.string() + ": manifest has no queries");
    return queries;
}

std::map<core::ItemId, core::GalleryItem> load_gallery(const std::filesystem::path& path) {
    std::map<core::ItemId, core::GalleryItem> gallery;
    util::for_each_jsonl(path, [&](size_t lineno, const nlohmann::json& rec) {
        core::GalleryItem item;
        try {
            item.item_id = rec.at("item_id").get<std::string>();
            item.image_ref = rec.at("image_path").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(at(path, lineno) + e.what());
        }
        if (item.item_id.empty()) throw ValidationError(at(path, lineno) + "empty item_id");
        if (!gallery.emplace(item.item_id, item).second) {
            throw ValidationError(at(path, lineno) + "duplicate item_id '" + item.item_id + "'");
        }
    });
    if (gallery.empty()) throw ValidationError(path.string() + ": gallery is empty");
    return gallery;
}

std::map<core::QueryId, core::InitialRanking> load_rankings(
    const std::filesystem::path& path, bool strict, std::vector<std::string>* warnings) {
    std::map<core::QueryId, core::InitialRanking> rankings;
    util::for_each_jsonl(path, [&](size_t lineno, const nlohmann::json& rec) {
        core::InitialRanking ranking;
        try {
            ranking.query_id = rec.at("query_id").get<std::string>();
            for (const auto& e : rec.at("ranking")) {
                ranking.entries.push_back(
                    {e.at("item_id").get<std::string>(), e.at("score").get<double>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(at(path, lineno) + e.what());
        }
        ranking = validate_ranking(std::move(ranking), at(path, lineno), strict, warnings);
        auto qid = ranking.query_id;
        if (!rankings.emplace(qid, std::move(ranking)).second) {
            throw ValidationError(at(path, lineno) + "duplicate ranking for query '" + qid +
                                  "'");
        }
    });
    return rankings;
}

Dataset cross_validate(std::vector<core::QueryRecord> queries,
                       std::map<core::ItemId, core::GalleryItem> gallery,
                       std::map<core::QueryId, core::InitialRanking> rankings) {
    std::set<core::QueryId> query_ids;
    for (const auto& q : queries) query_ids.insert(q.query_id);

    for (const auto& [qid, ranking] : rankings) {
        if (!query_ids.count(qid)) {
            throw ValidationError("ranking references unknown query '" + qid + "'");
        }
        for (const auto& entry : ranking.entries) {
            if (!gallery.count(entry.item_id)) {
                throw ValidationError("ranking for query '" + qid +
                                      "' references unknown gallery item '" + entry.item_id +
                                      "'");
            }
        }
    }

    for (const auto& q : queries) {
        auto it = rankings.find(q.query_id);
        if (it == rankings.end()) {
            throw ValidationError("query '" + q.query_id + "' has no initial ranking");
        }
        if (q.ground_truth_id) {
            if (!gallery.count(*q.ground_truth_id)) {
                throw ValidationError("query '" + q.query_id + "' ground truth '" +
                                      *q.ground_truth_id + "' is not in the gallery");
            }
            const auto& entries = it->second.entries;
            const bool present = std::any_of(
                entries.begin(), entries.end(),
                [&](const core::ScoredItem& e) { return e.item_id == *q.ground_truth_id; });
            if (!present) {
                throw ValidationError("query '" + q.query_id + "' ground truth '" +
                                      *q.ground_truth_id +
                                      "' does not appear in its ranking");
            }
        }
    }

    return {std::move(queries), std::move(gallery), std::move(rankings)};
}

Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const std::filesystem::path& gallery_path,
                     const std::filesystem::path& rankings_path, bool strict,
                     std::vector<std::string>* warnings) {
    return cross_validate(load_manifest(manifest_path), load_gallery(gallery_path),
                          load_rankings(rankings_path, strict, warnings));
}

HeadTail top_n(const core::InitialRanking& ranking, size_t n) {
    if (n == 0) throw InvalidInputError("top_n: n must be >= 1");
    const size_t head_n = std::min(n, ranking.entries.size());
    HeadTail out;
    out.head.assign(ranking.entries.begin(), ranking.entries.begin() + static_cast<long>(head_n));
    out.tail.assign(ranking.entries.begin() + static_cast<long>(head_n), ranking.entries.end());
    return out;
}

core::InitialRanking fetch_initial_scores(const core::QueryRecord& query,
                                          const std::string& retriever_url, size_t top_k,
                                          double timeout_s,
                                          std::vector<std::string>* warnings) {
    auto scheme_end = retriever_url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("retriever url must start with http:// or https://: " + retriever_url);
    }
    auto path_start = retriever_url.find('/', scheme_end + 3);
    const std::string origin =
        path_start == std::string::npos ? retriever_url : retriever_url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/" : retriever_url.substr(path_start);

    nlohmann::json body = {{"query_id", query.query_id},
                           {"text", query.text},
                           {"top_k", top_k}};

    httplib::Client client(origin);
    client.set_connection_timeout(std::chrono::duration<double>(timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(timeout_s));
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) {
        throw BackendError("retriever: transport error: " + httplib::to_string(res.error()),
                           /*retryable=*/true);
    }
    if (res->status != 200) {
        throw BackendError("retriever: status " + std::to_string(res->status),
                           /*retryable=*/false, res->status);
    }

    core::InitialRanking ranking;
    ranking.query_id = query.query_id;
    try {
        auto j = nlohmann::json::parse(res->body);
        for (const auto& e : j.at("ranking")) {
            ranking.entries.push_back(
                {e.at("item_id").get<std::string>(), e.at("score").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("retriever response for query '" + query.query_id +
                              "' is malformed: " + e.what());
    }
    return validate_ranking(std::move(ranking), "retriever: ", /*strict=*/false, warnings);
}

}  // namespace clozerank::ingest
