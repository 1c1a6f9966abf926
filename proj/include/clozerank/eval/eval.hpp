// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "clozerank/backends/client.hpp"
#include "clozerank/eval/records.hpp"
#include "clozerank/ingest/ingest.hpp"

namespace clozerank::eval {

struct PipelineConfig {
    size_t top_n = 3;
    core::DecayPolicy policy{};
    core::FusionWeights weights{};
    bool normalize_s1 = false;
    int workers = 4;
};

struct PipelineResult {
    std::vector<QueryOutcome> outcomes;  // manifest order
    size_t pass_n = 0;                   // head size the pass ran with
};

/// Mask stage for one query with the pipeline's degradation rule: a hard
/// extraction failure yields a zero-slot record carrying the failure note,
/// so the query bypasses re-ranking instead of aborting the batch.
MaskRecord mask_one(const core::QueryRecord& query, backends::ChatClient& masker,
                    const prompts::TemplateSet& templates);

/// Full pipeline over the dataset: mask -> complete top-N -> rerank, queries
/// processed concurrently up to `config.workers`. Per-query failures degrade
/// that query to its initial order (recorded in the outcome); they never
/// abort the batch.
PipelineResult run_pipeline(const ingest::Dataset& dataset,
                            const backends::BackendSet& backends,
                            const prompts::TemplateSet& templates,
                            const PipelineConfig& config);

/// Recall@K / mAP over the outcomes. Queries without a ground truth are
/// excluded (counted via `excluded_out`, one warning each). Returns nullopt
/// when no query could be evaluated.
std::optional<core::EvalReport> evaluate(const std::vector<QueryOutcome>& outcomes,
                                         const std::vector<size_t>& ks,
                                         size_t* excluded_out = nullptr,
                                         std::vector<std::string>* warnings = nullptr);

struct GridPoint {
    core::DecayPolicy policy{};
    core::FusionWeights weights{};
    size_t n = 3;
};

struct SweepRow {
    GridPoint point;
    std::optional<core::EvalReport> report;
    bool skipped = false;
    std::string skip_reason;
};

/// Re-scores the first pass's cached comparator groups under each grid point
/// (decay + fusion + metrics only; zero backend calls). Points needing a head
/// larger than the pass provided are reported as skipped. Rows come back
/// sorted by mAP descending (stable on ties).
std::vector<SweepRow> sweep(const ingest::Dataset& dataset, const PipelineResult& pass,
                            const std::vector<GridPoint>& grid, bool normalize_s1,
                            const std::vector<size_t>& ks);

// ---- emission (all content deterministic across identical runs) -----------

void write_masked_stage(const std::vector<MaskRecord>& records,
                        const std::filesystem::path& out_dir);
std::vector<MaskRecord> read_masked_stage(const std::filesystem::path& out_dir);

void write_completions_stage(const std::vector<core::Completion>& completions,
                             const std::filesystem::path& out_dir);
std::vector<core::Completion> read_completions_stage(const std::filesystem::path& out_dir);

/// Writes report.json plus one ranking and one trace record per query under
/// rankings/ and traces/.
void emit_report(const std::optional<core::EvalReport>& report, size_t evaluated,
                 size_t excluded, const std::map<std::string, std::string>& config_echo,
                 const std::vector<QueryOutcome>& outcomes,
                 const std::filesystem::path& out_dir);

void emit_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir,
                bool also_csv);

/// R@1/R@5/R@10/mAP one-liner, percentages with two decimals.
std::string summary_line(const core::EvalReport& report);

}  // namespace clozerank::eval
