#include "fsbench/evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <tuple>

#include "fsbench/error.h"
#include "fsbench/importance.h"

namespace fsbench {
namespace {

void check_lengths(std::size_t a, std::size_t b, std::string_view what) {
  if (a != b) {
    throw Error("evaluation.length_mismatch", std::string(what) + ": " + std::to_string(a) +
                                                  " predictions vs " + std::to_string(b) +
                                                  " targets");
  }
  if (a == 0) throw Error("evaluation.empty", std::string(what) + " needs at least one row");
}

auto record_key(const EvalRecord& r) {
  return std::tie(r.dataset, r.model, r.scenario, r.metric, r.degree, r.trial);
}

}  // namespace

std::string_view to_string(MetricKind metric) {
  switch (metric) {
    case MetricKind::kAccuracy:
      return "accuracy";
    case MetricKind::kAuc:
      return "auc";
    case MetricKind::kRmse:
      return "rmse";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view text) {
  if (text == "accuracy" || text == "acc") return MetricKind::kAccuracy;
  if (text == "auc" || text == "roc_auc") return MetricKind::kAuc;
  if (text == "rmse") return MetricKind::kRmse;
  throw Error("evaluation.bad_metric", "unknown metric '" + std::string(text) + "'");
}

bool higher_is_better(MetricKind metric) { return metric != MetricKind::kRmse; }

bool metric_applies(MetricKind metric, TaskKind task) {
  return (metric == MetricKind::kRmse) == (task == TaskKind::kRegression);
}

MetricKind primary_metric(TaskKind task) {
  return task == TaskKind::kRegression ? MetricKind::kRmse : MetricKind::kAccuracy;
}

double accuracy(std::span<const int> predicted, std::span<const int> labels) {
  check_lengths(predicted.size(), labels.size(), "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predicted[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double accuracy(std::span<const Prediction> predictions, std::span<const int> labels) {
  std::vector<int> predicted;
  predicted.reserve(predictions.size());
  for (const Prediction& p : predictions) predicted.push_back(p.label);
  return accuracy(predicted, labels);
}

double binary_auc(std::span<const double> scores, std::span<const bool> positive) {
  check_lengths(scores.size(), positive.size(), "roc_auc");
  const std::vector<double> ranks = fractional_ranks(scores);
  double rank_sum = 0.0;
  double n_pos = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (positive[i]) {
      rank_sum += ranks[i];
      n_pos += 1.0;
    }
  }
  const double n_neg = static_cast<double>(scores.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw Error("evaluation.degenerate_auc", "AUC needs at least one positive and one negative");
  }
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

AucResult roc_auc(const std::vector<std::vector<double>>& scores, std::span<const int> labels,
                  std::size_t num_classes) {
  check_lengths(scores.size(), labels.size(), "roc_auc");
  if (num_classes < 2) {
    throw Error("evaluation.degenerate_auc", "AUC needs at least two classes");
  }
  for (const auto& row : scores) {
    if (row.size() != num_classes) {
      throw Error("evaluation.length_mismatch", "score rows must have one entry per class");
    }
  }
  const std::size_t first = num_classes == 2 ? 1 : 0;
  AucResult result;
  double total = 0.0;
  std::size_t used = 0;
  std::vector<double> column(scores.size());
  std::unique_ptr<bool[]> positive(new bool[scores.size()]);
  for (std::size_t c = first; c < num_classes; ++c) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      column[i] = scores[i][c];
      positive[i] = labels[i] == static_cast<int>(c);
      n_pos += positive[i];
    }
    if (n_pos == 0 || n_pos == scores.size()) {
      result.skipped_classes.push_back(c);
      continue;
    }
    total += binary_auc(column, std::span<const bool>(positive.get(), scores.size()));
    ++used;
  }
  if (used == 0) {
    throw Error("evaluation.degenerate_auc",
                "no class has both positive and negative rows; AUC is undefined");
  }
  result.value = total / static_cast<double>(used);
  return result;
}

AucResult roc_auc(std::span<const Prediction> predictions, std::span<const int> labels,
                  std::size_t num_classes) {
  std::vector<std::vector<double>> scores;
  scores.reserve(predictions.size());
  for (const Prediction& p : predictions) scores.push_back(p.probabilities);
  return roc_auc(scores, labels, num_classes);
}

double rmse(std::span<const double> predictions, std::span<const double> targets) {
  check_lengths(predictions.size(), targets.size(), "rmse");
  double sum = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double e = predictions[i] - targets[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(targets.size()));
}

double rmse(std::span<const Prediction> predictions, std::span<const double> targets) {
  std::vector<double> values;
  values.reserve(predictions.size());
  for (const Prediction& p : predictions) values.push_back(p.value);
  return rmse(values, targets);
}

double performance_gap(double metric_i, double metric_0) {
  if (metric_0 == 0.0) {
    throw Error("evaluation.undefined_gap", "performance gap is undefined when metric_0 == 0");
  }
  return (metric_i - metric_0) / metric_0;
}

double aggregate_random(std::span<const double> per_subset) {
  if (per_subset.empty()) {
    throw Error("evaluation.empty", "cannot aggregate an empty list of subset metrics");
  }
  return std::accumulate(per_subset.begin(), per_subset.end(), 0.0) /
         static_cast<double>(per_subset.size());
}

bool record_less(const EvalRecord& a, const EvalRecord& b) {
  return record_key(a) < record_key(b);
}

std::vector<EvalRecord> aggregate_records(std::span<const EvalRecord> records) {
  std::vector<EvalRecord> out;
  std::map<std::tuple<std::string, std::string, ScenarioKind, MetricKind, double>,
           std::vector<const EvalRecord*>>
      random_groups;
  for (const EvalRecord& r : records) {
    if (r.scenario == ScenarioKind::kRandom) {
      random_groups[{r.dataset, r.model, r.scenario, r.metric, r.degree}].push_back(&r);
    } else {
      out.push_back(r);
    }
  }
  for (const auto& [key, group] : random_groups) {
    std::vector<double> values;
    values.reserve(group.size());
    for (const EvalRecord* r : group) values.push_back(r->metric_i);
    EvalRecord folded = *group.front();
    folded.trial = 0;
    folded.removed.clear();
    folded.metric_i = aggregate_random(values);
    folded.delta = folded.metric_0 != 0.0 ? performance_gap(folded.metric_i, folded.metric_0)
                                          : std::nan("");
    folded.subset_count = 0;
    for (const EvalRecord* r : group) folded.subset_count += r->subset_count;
    out.push_back(std::move(folded));
  }
  std::sort(out.begin(), out.end(), record_less);
  return out;
}

int degree_bucket(double degree) {
  if (degree <= 0.0) return 0;
  const double steps = std::floor(degree * 5.0 + 0.5 + 1e-9);
  return 20 * static_cast<int>(std::clamp(steps, 1.0, 5.0));
}

std::vector<GapCell> bucket_degrees(std::span<const EvalRecord> records) {
  using Key = std::tuple<TaskKind, ScenarioKind, MetricKind, std::string, int>;
  std::map<Key, std::pair<double, std::size_t>> sums;
  for (const EvalRecord& r : records) {
    if (!std::isfinite(r.delta)) continue;
    auto& [sum, count] = sums[{r.task, r.scenario, r.metric, r.model, degree_bucket(r.degree)}];
    sum += r.delta;
    ++count;
  }
  std::vector<GapCell> out;
  out.reserve(sums.size());
  for (const auto& [key, acc] : sums) {
    const auto& [task, scenario, metric, model, bucket] = key;
    out.push_back({task, scenario, metric, model, bucket,
                   acc.first / static_cast<double>(acc.second), acc.second});
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values, bool higher_better) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return higher_better ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
    const double shared = static_cast<double>(i + j) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

RankTable average_rank(std::span<const EvalRecord> records) {
  using CellKey = std::tuple<TaskKind, std::string, ScenarioKind, MetricKind, int>;
  // cell -> model -> (sum metric_i, count)
  std::map<CellKey, std::map<std::string, std::pair<double, std::size_t>>> cells;
  std::map<std::pair<TaskKind, MetricKind>, std::set<std::string>> models_per_task;
  for (const EvalRecord& r : records) {
    auto& acc = cells[{r.task, r.dataset, r.scenario, r.metric, degree_bucket(r.degree)}][r.model];
    acc.first += r.metric_i;
    ++acc.second;
    models_per_task[{r.task, r.metric}].insert(r.model);
  }

  RankTable table;
  using RowKey = std::tuple<TaskKind, MetricKind, int, std::string>;
  std::map<RowKey, std::pair<double, std::size_t>> per_task;
  for (const auto& [key, by_model] : cells) {
    const auto& [task, dataset, scenario, metric, bucket] = key;
    const auto& expected = models_per_task[{task, metric}];
    if (by_model.size() != expected.size()) {
      table.warnings.push_back("incomplete grid: dataset '" + dataset + "', scenario " +
                               std::string(to_string(scenario)) + ", bucket " +
                               std::to_string(bucket) + "% has " +
                               std::to_string(by_model.size()) + " of " +
                               std::to_string(expected.size()) + " models");
    }
    std::vector<std::string> names;
    std::vector<double> means;
    for (const auto& [model, acc] : by_model) {
      names.push_back(model);
      means.push_back(acc.first / static_cast<double>(acc.second));
    }
    const std::vector<double> ranks = average_ranks(means, higher_is_better(metric));
    for (std::size_t m = 0; m < names.size(); ++m) {
      auto& acc = per_task[{task, metric, bucket, names[m]}];
      acc.first += ranks[m];
      ++acc.second;
    }
  }

  std::map<std::pair<int, std::string>, std::pair<double, std::size_t>> overall;
  for (const auto& [key, acc] : per_task) {
    const auto& [task, metric, bucket, model] = key;
    const double mean = acc.first / static_cast<double>(acc.second);
    table.rows.push_back({std::string(to_string(task)), metric, bucket, model, mean, acc.second});
    if (metric == primary_metric(task)) {
      auto& o = overall[{bucket, model}];
      o.first += mean;
      ++o.second;
    }
  }
  for (const auto& [key, acc] : overall) {
    const auto& [bucket, model] = key;
    // Metric of "all" rows is nominal: each task contributes its primary one.
    table.rows.push_back({"all", MetricKind::kAccuracy, bucket, model,
                          acc.first / static_cast<double>(acc.second), acc.second});
  }
  return table;
}

}  // namespace fsbench
