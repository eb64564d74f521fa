#include "fsbench/reports.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "fsbench/csv.h"
#include "fsbench/error.h"

namespace fsbench {
namespace {

std::ofstream open_report(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io.unwritable", "cannot write '" + path.string() + "'");
  return out;
}

std::string number_or_empty(double v) { return std::isfinite(v) ? format_number(v) : ""; }

std::string join_indices(std::span<const std::size_t> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

void write_results_csv(std::span<const EvalRecord> records, const std::filesystem::path& path) {
  std::ofstream out = open_report(path);
  const std::vector<std::string> header = {"dataset", "model",    "task",     "scenario",
                                           "trial",   "degree",   "n_removed", "removed",
                                           "metric",  "metric_0", "metric_i", "delta"};
  write_csv_row(out, header);
  std::vector<EvalRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), record_less);
  for (const EvalRecord& r : sorted) {
    const std::vector<std::string> row = {r.dataset,
                                          r.model,
                                          std::string(to_string(r.task)),
                                          std::string(to_string(r.scenario)),
                                          std::to_string(r.trial),
                                          format_number(r.degree),
                                          std::to_string(r.n_removed),
                                          join_indices(r.removed),
                                          std::string(to_string(r.metric)),
                                          number_or_empty(r.metric_0),
                                          number_or_empty(r.metric_i),
                                          number_or_empty(r.delta)};
    write_csv_row(out, row);
  }
}

void write_gap_table_csv(std::span<const GapCell> cells, const std::filesystem::path& path) {
  std::set<std::string> models;
  using RowKey = std::tuple<TaskKind, ScenarioKind, MetricKind, int>;
  std::map<RowKey, std::map<std::string, double>> rows;
  for (const GapCell& c : cells) {
    models.insert(c.model);
    rows[{c.task, c.scenario, c.metric, c.bucket}][c.model] = c.mean_delta;
  }
  std::ofstream out = open_report(path);
  std::vector<std::string> header = {"task", "scenario", "metric", "bucket"};
  header.insert(header.end(), models.begin(), models.end());
  write_csv_row(out, header);
  for (const auto& [key, by_model] : rows) {
    const auto& [task, scenario, metric, bucket] = key;
    std::vector<std::string> row = {std::string(to_string(task)),
                                    std::string(to_string(scenario)),
                                    std::string(to_string(metric)), std::to_string(bucket)};
    for (const std::string& m : models) {
      const auto it = by_model.find(m);
      row.push_back(it == by_model.end() ? "" : format_number(it->second));
    }
    write_csv_row(out, row);
  }
}

void write_rank_table_csv(const RankTable& table, const std::filesystem::path& path) {
  std::set<std::string> models;
  // "all" rows sort after the per-task rows.
  using RowKey = std::tuple<bool, std::string, std::string, int>;
  std::map<RowKey, std::map<std::string, double>> rows;
  for (const RankCell& c : table.rows) {
    models.insert(c.model);
    const bool overall = c.task == "all";
    const std::string metric = overall ? "primary" : std::string(to_string(c.metric));
    rows[{overall, c.task, metric, c.bucket}][c.model] = c.average_rank;
  }
  std::ofstream out = open_report(path);
  std::vector<std::string> header = {"task", "metric", "bucket"};
  header.insert(header.end(), models.begin(), models.end());
  write_csv_row(out, header);
  for (const auto& [key, by_model] : rows) {
    const auto& [overall, task, metric, bucket] = key;
    std::vector<std::string> row = {task, metric, std::to_string(bucket)};
    for (const std::string& m : models) {
      const auto it = by_model.find(m);
      row.push_back(it == by_model.end() ? "" : format_number(it->second));
    }
    write_csv_row(out, row);
  }
}

void write_curve_csv(std::span<const EvalRecord> aggregated, const std::filesystem::path& path) {
  std::ofstream out = open_report(path);
  const std::vector<std::string> header = {"dataset", "model",       "scenario",
                                           "metric",  "trial",       "degree",
                                           "mean_metric", "mean_delta", "subsets"};
  write_csv_row(out, header);
  for (const EvalRecord& r : aggregated) {
    const std::vector<std::string> row = {r.dataset,
                                          r.model,
                                          std::string(to_string(r.scenario)),
                                          std::string(to_string(r.metric)),
                                          std::to_string(r.trial),
                                          format_number(r.degree),
                                          number_or_empty(r.metric_i),
                                          number_or_empty(r.delta),
                                          std::to_string(r.subset_count)};
    write_csv_row(out, row);
  }
}

void write_plan_json(std::span<const DatasetRun> runs, const std::filesystem::path& path) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const DatasetRun& run : runs) {
    nlohmann::ordered_json entry;
    entry["dataset"] = run.dataset;
    entry["train_rows"] = run.train_rows;
    entry["test_rows"] = run.test_rows;
    nlohmann::ordered_json order = nlohmann::ordered_json::array();
    for (std::size_t j : run.ranking.order) order.push_back(run.ranking.scores[j].name);
    entry["ascending_importance"] = order;
    nlohmann::ordered_json plans = nlohmann::ordered_json::array();
    for (const ShiftPlan& plan : run.plans) {
      plans.push_back(nlohmann::ordered_json::parse(plan_to_json(plan)));
    }
    entry["plans"] = plans;
    root.push_back(entry);
  }
  std::ofstream out = open_report(path);
  out << root.dump(2) << '\n';
}

void emit_reports(const ExperimentResult& result, const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);
  const std::vector<EvalRecord> aggregated = aggregate_records(result.records);
  write_results_csv(result.records, output_dir / "results.csv");
  write_gap_table_csv(bucket_degrees(aggregated), output_dir / "gap_table.csv");
  write_rank_table_csv(average_rank(aggregated), output_dir / "rank_table.csv");
  write_curve_csv(aggregated, output_dir / "curve.csv");
  write_plan_json(result.runs, output_dir / "plan.json");
  for (const DatasetRun& run : result.runs) {
    const std::filesystem::path dir = output_dir / "datasets" / run.dataset;
    std::filesystem::create_directories(dir);
    write_ranking_csv(run.ranking, dir / "importance.csv");
    write_concordance_csv(run.concordance, dir / "concordance.csv");
    if (run.train) write_correlation_matrix_csv(*run.train, dir / "correlation_matrix.csv");
  }
  if (!result.warnings.empty()) {
    std::ofstream out = open_report(output_dir / "warnings.txt");
    for (const std::string& w : result.warnings) out << w << '\n';
  }
}

}  // namespace fsbench
