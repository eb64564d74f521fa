#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "fsbench/evaluation.h"
#include "fsbench/experiment.h"

namespace fsbench {

// results.csv: one row per record, sorted by record key.
void write_results_csv(std::span<const EvalRecord> records, const std::filesystem::path& path);

// gap_table.csv: aggregated records bucketed by degree (rows) per model
// (columns).
void write_gap_table_csv(std::span<const GapCell> cells, const std::filesystem::path& path);

// rank_table.csv: average rank per (task, metric, bucket) row and model.
void write_rank_table_csv(const RankTable& table, const std::filesystem::path& path);

// curve.csv: (dataset, model, scenario, metric, trial, degree, mean metric,
// mean delta, subset count), one row per aggregated record.
void write_curve_csv(std::span<const EvalRecord> aggregated, const std::filesystem::path& path);

void write_plan_json(std::span<const DatasetRun> runs, const std::filesystem::path& path);

// Writes the full bundle (results, gap_table, rank_table, curve, plan, plus
// per-dataset importance, correlation-matrix and concordance CSVs).
void emit_reports(const ExperimentResult& result, const std::filesystem::path& output_dir);

}  // namespace fsbench
