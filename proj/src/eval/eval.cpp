// SPDX-License-Identifier: Apache-2.0
#include "clozerank/eval/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "clozerank/completion/completion.hpp"
#include "clozerank/core/metrics.hpp"
#include "clozerank/core/scoring.hpp"
#include "clozerank/errors.hpp"
#include "clozerank/util.hpp"

namespace clozerank::eval {

namespace {

cloze::MaskOutcome zero_slot_outcome(const std::string& text, const std::string& note) {
    cloze::MaskOutcome outcome;
    outcome.masked.original_text = text;
    outcome.masked.masked_text = text;
    outcome.warnings.push_back(note);
    return outcome;
}

nlohmann::json metrics_json(const core::EvalReport& report) {
    nlohmann::json recall = nlohmann::json::object();
    nlohmann::json recall_pct = nlohmann::json::object();
    for (const auto& [k, v] : report.recall_at) {
        recall[std::to_string(k)] = v;
        recall_pct[std::to_string(k)] = v * 100.0;
    }
    return {{"mean_ap", report.mean_ap},
            {"mean_ap_pct", report.mean_ap * 100.0},
            {"recall_at", std::move(recall)},
            {"recall_at_pct", std::move(recall_pct)}};
}

}  // namespace

MaskRecord mask_one(const core::QueryRecord& query, backends::ChatClient& masker,
                    const prompts::TemplateSet& templates) {
    MaskRecord record;
    record.query_id = query.query_id;
    try {
        record.outcome = cloze::generate_masked_query(query, masker, templates);
    } catch (const Error& e) {
        record.failure = e.what();
        record.outcome = zero_slot_outcome(query.text,
                                           "mask stage failed; query bypasses re-ranking");
    }
    return record;
}

PipelineResult run_pipeline(const ingest::Dataset& dataset,
                            const backends::BackendSet& backends,
                            const prompts::TemplateSet& templates,
                            const PipelineConfig& config) {
    core::validate(config.policy);
    core::validate(config.weights);
    if (config.top_n == 0) throw InvalidInputError("run_pipeline: top_n must be >= 1");

    PipelineResult result;
    result.pass_n = config.top_n;
    result.outcomes.resize(dataset.queries.size());

    util::parallel_for(dataset.queries.size(), config.workers, [&](size_t i) {
        const auto& query = dataset.queries[i];
        const auto& initial = dataset.rankings.at(query.query_id);
        QueryOutcome& outcome = result.outcomes[i];
        outcome.query = query;

        try {
            try {
                outcome.mask = cloze::generate_masked_query(query, *backends.masker, templates);
            } catch (const Error& e) {
                outcome.failure = e.what();
                outcome.mask = zero_slot_outcome(query.text,
                                                 "mask stage failed; query bypasses re-ranking");
            }

            const auto split = ingest::top_n(initial, config.top_n);
            if (!outcome.mask.masked.zero_slots() && split.head.size() >= 2) {
                std::vector<core::GalleryItem> items;
                items.reserve(split.head.size());
                for (const auto& entry : split.head) {
                    items.push_back(dataset.gallery.at(entry.item_id));
                }
                outcome.completions = completion::complete_candidates(
                    query.query_id, outcome.mask.masked, items, *backends.completer, templates);
            }

            auto reranked = rerank::rerank_query(
                query, outcome.mask.masked, initial, outcome.completions, config.policy,
                config.weights, config.top_n, config.normalize_s1, *backends.comparator,
                templates);
            outcome.final = std::move(reranked.final);
            outcome.trace = std::move(reranked.trace);
        } catch (const std::exception& e) {
            // Last-resort per-query degradation: keep the initial order.
            if (!outcome.failure.empty()) outcome.failure += "; ";
            outcome.failure += e.what();
            auto fallback = rerank::score_with_groups(query, initial, {}, config.policy,
                                                      config.weights, config.top_n,
                                                      config.normalize_s1);
            outcome.final = std::move(fallback.final);
            outcome.trace = std::move(fallback.trace);
            outcome.trace.bypass_reason = "pipeline_error";
        }
    });
    return result;
}

std::optional<core::EvalReport> evaluate(const std::vector<QueryOutcome>& outcomes,
                                         const std::vector<size_t>& ks, size_t* excluded_out,
                                         std::vector<std::string>* warnings) {
    std::vector<std::pair<core::QueryId, core::QueryMetrics>> rows;
    size_t excluded = 0;
    for (const auto& outcome : outcomes) {
        if (!outcome.query.ground_truth_id) {
            ++excluded;
            if (warnings) {
                warnings->push_back("query '" + outcome.query.query_id +
                                    "' has no ground truth; excluded from metrics");
            }
            continue;
        }
        core::QueryMetrics m;
        m.rank_of_truth = core::rank_of(outcome.final, *outcome.query.ground_truth_id);
        m.average_precision = core::average_precision(outcome.final,
                                                      *outcome.query.ground_truth_id);
        rows.emplace_back(outcome.query.query_id, m);
    }
    if (excluded_out) *excluded_out = excluded;
    if (rows.empty()) return std::nullopt;
    return core::mean_metrics(rows, ks);
}

std::vector<SweepRow> sweep(const ingest::Dataset& dataset, const PipelineResult& pass,
                            const std::vector<GridPoint>& grid, bool normalize_s1,
                            const std::vector<size_t>& ks) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());

    for (const auto& point : grid) {
        SweepRow row;
        row.point = point;
        if (point.n > pass.pass_n) {
            row.skipped = true;
            row.skip_reason = "needs completions for n=" + std::to_string(point.n) +
                              " but the pass cached n=" + std::to_string(pass.pass_n);
            rows.push_back(std::move(row));
            continue;
        }
        core::validate(point.policy);
        core::validate(point.weights);

        std::vector<QueryOutcome> scored;
        scored.reserve(pass.outcomes.size());
        for (const auto& outcome : pass.outcomes) {
            const auto& initial = dataset.rankings.at(outcome.query.query_id);
            const size_t head_n = std::min(point.n, initial.entries.size());

            std::vector<std::vector<core::ItemId>> groups;
            if (!outcome.trace.groups.empty() && head_n >= 2) {
                std::vector<core::ItemId> head_ids;
                for (size_t i = 0; i < head_n; ++i) {
                    head_ids.push_back(initial.entries[i].item_id);
                }
                groups = rerank::project_groups(outcome.trace.groups, head_ids);
            }

            auto rescored = rerank::score_with_groups(outcome.query, initial, groups,
                                                      point.policy, point.weights, point.n,
                                                      normalize_s1);
            QueryOutcome q;
            q.query = outcome.query;
            q.final = std::move(rescored.final);
            scored.push_back(std::move(q));
        }
        row.report = evaluate(scored, ks, nullptr, nullptr);
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        const double ma = a.report ? a.report->mean_ap : -1.0;
        const double mb = b.report ? b.report->mean_ap : -1.0;
        return ma > mb;
    });
    return rows;
}

void write_masked_stage(const std::vector<MaskRecord>& records,
                        const std::filesystem::path& out_dir) {
    std::string content;
    for (const auto& r : records) content += to_json(r).dump() + "\n";
    util::atomic_write_file(out_dir / "masked.jsonl", content);
}

std::vector<MaskRecord> read_masked_stage(const std::filesystem::path& out_dir) {
    const auto path = out_dir / "masked.jsonl";
    if (!std::filesystem::exists(path)) {
        throw ValidationError("missing staged file: " + path.string() +
                              " (run the mask stage first)");
    }
    std::vector<MaskRecord> records;
    util::for_each_jsonl(path, [&](size_t, const nlohmann::json& j) {
        records.push_back(mask_record_from_json(j));
    });
    return records;
}

void write_completions_stage(const std::vector<core::Completion>& completions,
                             const std::filesystem::path& out_dir) {
    std::string content;
    for (const auto& c : completions) content += to_json(c).dump() + "\n";
    util::atomic_write_file(out_dir / "completions.jsonl", content);
}

std::vector<core::Completion> read_completions_stage(const std::filesystem::path& out_dir) {
    const auto path = out_dir / "completions.jsonl";
    if (!std::filesystem::exists(path)) {
        throw ValidationError("missing staged file: " + path.string() +
                              " (run the complete stage first)");
    }
    std::vector<core::Completion> completions;
    util::for_each_jsonl(path, [&](size_t, const nlohmann::json& j) {
        completions.push_back(completion_from_json(j));
    });
    return completions;
}

void emit_report(const std::optional<core::EvalReport>& report, size_t evaluated,
                 size_t excluded, const std::map<std::string, std::string>& config_echo,
                 const std::vector<QueryOutcome>& outcomes,
                 const std::filesystem::path& out_dir) {
    nlohmann::json j;
    j["config"] = nlohmann::json::object();
    for (const auto& [k, v] : config_echo) j["config"][k] = v;
    j["queries_evaluated"] = evaluated;
    j["queries_excluded"] = excluded;
    if (report) {
        j["metrics"] = metrics_json(*report);
        nlohmann::json per_query = nlohmann::json::object();
        for (const auto& [qid, m] : report->per_query) {
            per_query[qid] = {{"rank", m.rank_of_truth ? nlohmann::json(*m.rank_of_truth)
                                                       : nlohmann::json(nullptr)},
                              {"ap", m.average_precision}};
        }
        j["per_query"] = std::move(per_query);
    } else {
        j["metrics"] = nullptr;
        j["per_query"] = nlohmann::json::object();
    }
    util::atomic_write_file(out_dir / "report.json", j.dump(2) + "\n");

    std::filesystem::create_directories(out_dir / "rankings");
    std::filesystem::create_directories(out_dir / "traces");
    for (const auto& outcome : outcomes) {
        const std::string stem = util::safe_file_stem(outcome.query.query_id);
        util::atomic_write_file(out_dir / "rankings" / (stem + ".json"),
                                ranking_to_json(outcome).dump() + "\n");
        util::atomic_write_file(out_dir / "traces" / (stem + ".json"),
                                trace_to_json(outcome).dump() + "\n");
    }
}

void emit_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir,
                bool also_csv) {
    std::string jsonl;
    std::string csv = "policy,beta,d,alpha1,alpha2,n,mean_ap,recall_at_1\n";
    for (const auto& row : rows) {
        const bool exponential = row.point.policy.kind == core::DecayPolicy::Kind::kExponential;
        nlohmann::json j;
        j["policy"] = exponential ? "exponential" : "linear";
        j["beta"] = exponential ? nlohmann::json(row.point.policy.base) : nlohmann::json(nullptr);
        j["d"] = exponential ? nlohmann::json(nullptr) : nlohmann::json(row.point.policy.step);
        j["alpha1"] = row.point.weights.alpha1;
        j["alpha2"] = row.point.weights.alpha2;
        j["n"] = row.point.n;
        if (row.skipped) {
            j["skipped"] = true;
            j["skip_reason"] = row.skip_reason;
        } else if (row.report) {
            j["metrics"] = metrics_json(*row.report);
        } else {
            j["metrics"] = nullptr;
        }
        jsonl += j.dump() + "\n";

        if (also_csv) {
            std::ostringstream line;
            line << (exponential ? "exponential" : "linear") << ','
                 << (exponential ? util::format_double(row.point.policy.base) : "") << ','
                 << (exponential ? "" : util::format_double(row.point.policy.step)) << ','
                 << util::format_double(row.point.weights.alpha1) << ','
                 << util::format_double(row.point.weights.alpha2) << ',' << row.point.n << ',';
            if (row.report) {
                line << util::format_double(row.report->mean_ap) << ','
                     << util::format_double(row.report->recall_at.count(1)
                                                ? row.report->recall_at.at(1)
                                                : 0.0);
            } else {
                line << "skipped,";
            }
            csv += line.str() + "\n";
        }
    }
    util::atomic_write_file(out_dir / "sweep.jsonl", jsonl);
    if (also_csv) util::atomic_write_file(out_dir / "sweep.csv", csv);
}

std::string summary_line(const core::EvalReport& report) {
    char buf[160];
    auto r = [&](size_t k) {
        auto it = report.recall_at.find(k);
        return it == report.recall_at.end() ? 0.0 : it->second * 100.0;
    };
    std::snprintf(buf, sizeof(buf), "R@1 %.2f  R@5 %.2f  R@10 %.2f  mAP %.2f", r(1), r(5),
                  r(10), report.mean_ap * 100.0);
    return buf;
}

}  // namespace clozerank::eval
