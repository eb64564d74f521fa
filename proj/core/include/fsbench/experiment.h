#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fsbench/dataset.h"
#include "fsbench/evaluation.h"
#include "fsbench/importance.h"
#include "fsbench/imputation.h"
#include "fsbench/models.h"
#include "fsbench/shift.h"

namespace fsbench {

struct ExperimentConfig {
  // Paths, or registered names resolved as <data_dir>/<name>.csv.
  std::vector<std::string> datasets;
  // Model specs as accepted by parse_model_spec.
  std::vector<std::string> models = {"cart"};
  ScenarioKind task = ScenarioKind::kRandom;
  // A single degree, or the full {1/N, ..., 1} grid when unset.
  std::optional<double> degree;
  bool export_dataset = false;
  std::uint64_t seed = 0;
  // Reports are written here when nonempty.
  std::filesystem::path output_dir;
  // Empty: the task's primary metric. Metrics that do not apply to a
  // dataset's task are skipped.
  std::vector<MetricKind> metrics;
  double train_fraction = kDefaultTrainFraction;
  ImputationStrategy imputation = ImputationStrategy::kMeanMode;
  // Also evaluate models retrained on the shifted representation, reported
  // under "<model>+retrained".
  bool upper_bound = false;
  std::size_t combination_cap = kDefaultCombinationCap;
  // 0: hardware concurrency.
  std::size_t jobs = 0;
  std::filesystem::path data_dir;
  std::chrono::seconds bridge_timeout{600};
};

struct DatasetRun {
  std::string dataset;
  Schema schema;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::shared_ptr<const Dataset> train;
  ImportanceRanking ranking;
  Concordance concordance;
  std::vector<ShiftPlan> plans;
};

struct ExperimentResult {
  // Baseline and per-subset records, sorted.
  std::vector<EvalRecord> records;
  std::vector<DatasetRun> runs;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> exported_files;
  std::size_t fits = 0;
  // Predict calls on shifted test sets (baseline predictions excluded).
  std::size_t shifted_predictions = 0;
};

std::filesystem::path resolve_dataset(const std::string& name_or_path,
                                      const std::filesystem::path& data_dir);

// Directory holding the bundled datasets: $FSBENCH_DATA_DIR if set, else the
// source-tree data/ directory.
std::filesystem::path default_data_dir();

// Plans a dataset's scenario: every ordinal for single, otherwise one plan per
// degree (the configured one or the full grid).
std::vector<ShiftPlan> make_plans(const ImportanceRanking& ranking,
                                  const ExperimentConfig& config);

// Evaluates one loaded dataset against every configured model.
ExperimentResult evaluate_dataset(const Dataset& dataset, const ExperimentConfig& config);

// load -> split -> rank -> plan -> fit -> impute + predict per subset ->
// metrics and gaps; writes the report bundle when output_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace fsbench
