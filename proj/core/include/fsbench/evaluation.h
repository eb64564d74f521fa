#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/dataset.h"
#include "fsbench/models.h"
#include "fsbench/shift.h"

namespace fsbench {

enum class MetricKind { kAccuracy, kAuc, kRmse };

std::string_view to_string(MetricKind metric);
MetricKind parse_metric_kind(std::string_view text);
bool higher_is_better(MetricKind metric);
bool metric_applies(MetricKind metric, TaskKind task);
// accuracy for classification, rmse for regression.
MetricKind primary_metric(TaskKind task);

double accuracy(std::span<const int> predicted, std::span<const int> labels);
double accuracy(std::span<const Prediction> predictions, std::span<const int> labels);

struct AucResult {
  double value = 0.5;
  // Classes whose one-vs-rest term was skipped (absent from labels or
  // present in every row).
  std::vector<std::size_t> skipped_classes;
};

// Binary AUC as the Mann-Whitney probability that a random positive outscores
// a random negative, ties counting one half.
double binary_auc(std::span<const double> scores, std::span<const bool> positive);

// Binary tasks score class 1; multiclass is the unweighted macro average of
// one-vs-rest AUCs over the classes that have both positives and negatives.
AucResult roc_auc(const std::vector<std::vector<double>>& scores, std::span<const int> labels,
                  std::size_t num_classes);
AucResult roc_auc(std::span<const Prediction> predictions, std::span<const int> labels,
                  std::size_t num_classes);

double rmse(std::span<const double> predictions, std::span<const double> targets);
double rmse(std::span<const Prediction> predictions, std::span<const double> targets);

// (metric_i - metric_0) / metric_0, sign kept as-is for every metric.
double performance_gap(double metric_i, double metric_0);

double aggregate_random(std::span<const double> per_subset);

struct EvalRecord {
  std::string dataset;
  std::string model;
  TaskKind task = TaskKind::kBinary;
  ScenarioKind scenario = ScenarioKind::kRandom;
  // Single: the 1-based ordinal; random: subset index; others 0.
  std::size_t trial = 0;
  double degree = 0.0;
  std::size_t n_removed = 0;
  std::vector<std::size_t> removed;
  MetricKind metric = MetricKind::kAccuracy;
  double metric_0 = 0.0;
  double metric_i = 0.0;
  double delta = 0.0;
  // Number of per-subset records folded into this one (1 if not aggregated).
  std::size_t subset_count = 1;
};

// Folds per-subset random records sharing (dataset, model, scenario, degree,
// metric) into one record carrying the mean metric; other records pass
// through. Output sorted by record key.
std::vector<EvalRecord> aggregate_records(std::span<const EvalRecord> records);

// Canonical ordering used for every report.
bool record_less(const EvalRecord& a, const EvalRecord& b);

// Bucket in percent: 0 for degree 0, otherwise the nearest of
// {20, 40, 60, 80, 100}, ties upward.
int degree_bucket(double degree);

struct GapCell {
  TaskKind task = TaskKind::kBinary;
  ScenarioKind scenario = ScenarioKind::kRandom;
  MetricKind metric = MetricKind::kAccuracy;
  std::string model;
  int bucket = 0;
  double mean_delta = 0.0;
  std::size_t count = 0;
};

// Mean delta per (task, scenario, metric, model, bucket), sorted by that key.
std::vector<GapCell> bucket_degrees(std::span<const EvalRecord> records);

struct RankCell {
  // "all" rows average the per-task rows of each task's primary metric.
  std::string task;
  MetricKind metric = MetricKind::kAccuracy;
  int bucket = 0;
  std::string model;
  double average_rank = 0.0;
  // Number of (dataset, scenario) cells averaged.
  std::size_t cells = 0;
};

struct RankTable {
  std::vector<RankCell> rows;
  std::vector<std::string> warnings;
};

// Average ranks: models are ranked inside each (task, dataset, scenario,
// metric, bucket) cell on their mean metric_i (ties share the average
// rank), ranks are averaged across datasets and scenarios per task, then
// across tasks.
RankTable average_rank(std::span<const EvalRecord> records);

// 1-based ranks with ties averaged; `higher_better` flips the direction.
std::vector<double> average_ranks(std::span<const double> values, bool higher_better);

}  // namespace fsbench
