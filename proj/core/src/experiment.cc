#include "fsbench/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "fsbench/error.h"
#include "fsbench/reports.h"
#include "fsbench/rng.h"

namespace fsbench {
namespace {

struct WorkItem {
  const ShiftPlan* plan = nullptr;
  std::size_t trial = 0;
  const FeatureSubset* subset = nullptr;
};

struct FittedModel {
  ModelSpec spec;
  std::shared_ptr<const TrainedModel> model;
  // metric_0 per configured metric, same order as the metric list.
  std::vector<double> baseline;
};

std::uint64_t subset_hash(const FeatureSubset& subset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t v : subset) {
    h ^= static_cast<std::uint64_t>(v) + 1;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double compute_metric(MetricKind metric, std::span<const Prediction> predictions,
                      const EncodedData& truth, std::size_t num_classes) {
  switch (metric) {
    case MetricKind::kAccuracy:
      return accuracy(predictions, truth.labels);
    case MetricKind::kAuc:
      return roc_auc(predictions, truth.labels, num_classes).value;
    case MetricKind::kRmse:
      return rmse(predictions, truth.targets);
  }
  return std::nan("");
}

std::string export_file_name(const std::string& dataset, const WorkItem& item) {
  std::string name = dataset + "__" + std::string(to_string(item.plan->scenario.kind)) + "__d" +
                     format_number(item.plan->scenario.degree) + "__t" +
                     std::to_string(item.trial) + ".csv";
  std::replace_if(name.begin(), name.end(), [](char c) { return c == '/' || c == ' '; }, '_');
  return name;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads; the first
// exception is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        while (!failed) {
          const std::size_t i = next++;
          if (i >= count) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("FSBENCH_DATA_DIR"); env && *env) return env;
  return FSBENCH_DEFAULT_DATA_DIR;
}

std::filesystem::path resolve_dataset(const std::string& name_or_path,
                                      const std::filesystem::path& data_dir) {
  const std::filesystem::path direct(name_or_path);
  if (std::filesystem::is_regular_file(direct)) return direct;
  const std::filesystem::path dir = data_dir.empty() ? default_data_dir() : data_dir;
  const std::filesystem::path registered = dir / (name_or_path + ".csv");
  if (std::filesystem::is_regular_file(registered)) return registered;
  throw Error("dataset.not_found", "no file '" + name_or_path + "' and no registered dataset '" +
                                       registered.string() + "'");
}

std::vector<ShiftPlan> make_plans(const ImportanceRanking& ranking,
                                  const ExperimentConfig& config) {
  const std::size_t n = ranking.num_features();
  std::vector<ShiftPlan> plans;
  if (config.task == ScenarioKind::kSingle) {
    for (std::size_t k = 1; k <= n; ++k) plans.push_back(plan_single(ranking, k));
    return plans;
  }
  const std::vector<double> degrees =
      config.degree ? std::vector<double>{*config.degree} : degree_grid(n);
  for (double degree : degrees) {
    if (config.task == ScenarioKind::kRandom) {
      plans.push_back(plan_random(n, degree, config.seed, config.combination_cap));
    } else {
      plans.push_back(plan_ordered(ranking, degree, config.task));
    }
  }
  return plans;
}

ExperimentResult evaluate_dataset(const Dataset& dataset, const ExperimentConfig& config) {
  if (config.export_dataset && config.output_dir.empty()) {
    throw Error("experiment.no_output_dir", "export_dataset requires an output directory");
  }
  ExperimentResult result;
  const DataSplit data = split(dataset, config.train_fraction, config.seed);
  for (const std::string& w : data.warnings) result.warnings.push_back(dataset.name() + ": " + w);

  DatasetRun run;
  run.dataset = dataset.name();
  run.schema = dataset.schema();
  run.train_rows = data.train.num_rows();
  run.test_rows = data.test.num_rows();
  run.train = std::make_shared<const Dataset>(data.train);
  run.ranking = rank_features(data.train, ImportanceMethod::kPearson);
  run.concordance = concordance(data.train);
  run.plans = make_plans(run.ranking, config);
  for (std::size_t j : run.ranking.degenerate_features()) {
    result.warnings.push_back(dataset.name() + ": feature '" + run.ranking.scores[j].name +
                              "' has zero variance in the train split");
  }

  const ImputationRecipe recipe = fit_recipe(data.train, config.imputation);
  const Encoder encoder = Encoder::fit(data.train);
  const EncodedData truth = encoder.transform(data.test);
  if (truth.unknown_targets > 0) {
    result.warnings.push_back(dataset.name() + ": " + std::to_string(truth.unknown_targets) +
                              " test rows carry a target label unseen in training");
  }
  if (truth.unknown_feature_cells > 0) {
    result.warnings.push_back(dataset.name() + ": " + std::to_string(truth.unknown_feature_cells) +
                              " test cells carry a category unseen in training");
  }

  std::vector<MetricKind> metrics;
  for (MetricKind m : config.metrics.empty() ? std::vector{primary_metric(dataset.task())}
                                             : config.metrics) {
    if (metric_applies(m, dataset.task())) metrics.push_back(m);
  }
  if (metrics.empty()) {
    throw Error("experiment.no_metric", "none of the requested metrics applies to " +
                                            std::string(to_string(dataset.task())) + " task '" +
                                            dataset.name() + "'");
  }

  BridgeOptions bridge;
  bridge.timeout = config.bridge_timeout;
  bool any_external = false;
  std::vector<FittedModel> fitted;
  for (const std::string& text : config.models) {
    ModelSpec spec = parse_model_spec(text);
    if (spec.seed == 0) spec.seed = config.seed;
    if (!supports(spec.kind, dataset.task())) {
      result.warnings.push_back("model '" + spec.name + "' skipped: it does not support " +
                                std::string(to_string(dataset.task())) + " task '" +
                                dataset.name() + "'");
      continue;
    }
    any_external = any_external || spec.kind == ModelKind::kExternal;
    FittedModel f{spec, fit_model(spec, data.train, bridge), {}};
    ++result.fits;
    for (const std::string& w : f.model->warnings()) {
      result.warnings.push_back(dataset.name() + "/" + spec.name + ": " + w);
    }
    const std::vector<Prediction> predictions = f.model->predict(data.test);
    for (MetricKind m : metrics) {
      f.baseline.push_back(compute_metric(m, predictions, truth, encoder.num_classes()));
    }
    fitted.push_back(std::move(f));
  }
  if (fitted.empty()) {
    throw Error("experiment.no_compatible_model",
                "no configured model supports " + std::string(to_string(dataset.task())) +
                    " task '" + dataset.name() + "'");
  }

  auto make_record = [&](const FittedModel& f, std::string model_name, std::size_t m,
                         double value) {
    EvalRecord r;
    r.dataset = dataset.name();
    r.model = std::move(model_name);
    r.task = dataset.task();
    r.scenario = config.task;
    r.metric = metrics[m];
    r.metric_0 = f.baseline[m];
    r.metric_i = value;
    r.delta = r.metric_0 != 0.0 ? performance_gap(value, r.metric_0) : std::nan("");
    return r;
  };

  for (const FittedModel& f : fitted) {
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      result.records.push_back(make_record(f, f.spec.name, m, f.baseline[m]));
      if (f.baseline[m] == 0.0) {
        result.warnings.push_back(dataset.name() + "/" + f.spec.name + ": " +
                                  std::string(to_string(metrics[m])) +
                                  " is 0 on the unshifted test split; gaps are undefined");
      }
    }
  }

  std::vector<WorkItem> items;
  for (const ShiftPlan& plan : run.plans) {
    // Degree 0 is the baseline, already recorded above.
    if (plan.scenario.degree == 0.0 && plan.n_removed == 0) continue;
    for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
      const std::size_t trial =
          plan.scenario.kind == ScenarioKind::kSingle
              ? plan.scenario.single_index
              : (plan.scenario.kind == ScenarioKind::kRandom ? s : 0);
      items.push_back({&plan, trial, &plan.subsets[s]});
    }
  }

  if (config.export_dataset) {
    std::filesystem::create_directories(config.output_dir / "shifted");
  }

  std::vector<std::vector<EvalRecord>> item_records(items.size());
  std::vector<std::filesystem::path> item_exports(items.size());
  const std::size_t jobs =
      any_external ? 1
                   : (config.jobs ? config.jobs
                                  : std::max(1u, std::thread::hardware_concurrency()));

  parallel_for(items.size(), jobs, [&](std::size_t i) {
    const WorkItem& item = items[i];
    const FeatureSubset& subset = *item.subset;
    const std::uint64_t item_seed = mix_seed(config.seed, subset_hash(subset));
    const Dataset shifted = apply_imputation(data.test, subset, recipe, item_seed);

    if (config.export_dataset) {
      ExportMetadata meta;
      meta.dataset = dataset.name();
      meta.scenario = std::string(to_string(item.plan->scenario.kind));
      meta.degree = item.plan->scenario.degree;
      meta.trial = item.trial;
      meta.removed = subset;
      for (std::size_t j : subset) meta.removed_names.push_back(dataset.column(j).name);
      meta.seed = item_seed;
      meta.imputation = std::string(to_string(config.imputation));
      meta.schema = dataset.schema();
      const std::filesystem::path path =
          config.output_dir / "shifted" / export_file_name(dataset.name(), item);
      export_shifted(data.test, subset, recipe, path, item_seed, &meta);
      item_exports[i] = path;
    }

    auto& out = item_records[i];
    auto add = [&](const FittedModel& f, const std::string& name,
                   std::span<const Prediction> predictions) {
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        EvalRecord r = make_record(
            f, name, m, compute_metric(metrics[m], predictions, truth, encoder.num_classes()));
        r.trial = item.trial;
        r.degree = item.plan->scenario.degree;
        r.n_removed = subset.size();
        r.removed = subset;
        out.push_back(std::move(r));
      }
    };
    for (const FittedModel& f : fitted) {
      add(f, f.spec.name, f.model->predict(shifted));
      if (config.upper_bound) {
        const auto retrained =
            fit_upper_bound(f.spec, data, subset, config.imputation, bridge);
        add(f, f.spec.name + "+retrained", retrained->predict(shifted));
      }
    }
  });

  for (std::size_t i = 0; i < items.size(); ++i) {
    for (EvalRecord& r : item_records[i]) result.records.push_back(std::move(r));
    if (!item_exports[i].empty()) {
      result.exported_files.push_back(item_exports[i]);
      result.exported_files.push_back(sidecar_path(item_exports[i]));
    }
  }
  result.shifted_predictions = items.size() * fitted.size();
  if (config.upper_bound) {
    result.fits += items.size() * fitted.size();
    // Retrained models share the original model's baseline.
    for (const FittedModel& f : fitted) {
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        result.records.push_back(make_record(f, f.spec.name + "+retrained", m, f.baseline[m]));
      }
    }
  }
  std::sort(result.records.begin(), result.records.end(), record_less);
  result.runs.push_back(std::move(run));
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.datasets.empty()) throw Error("cli.usage", "no dataset given");
  if (config.models.empty()) throw Error("cli.usage", "no model given");
  if (config.degree && !(*config.degree >= 0.0 && *config.degree <= 1.0)) {
    throw Error("shift.bad_degree", "degree must lie in [0, 1]");
  }

  ExperimentResult merged;
  for (const std::string& entry : config.datasets) {
    const std::filesystem::path path = resolve_dataset(entry, config.data_dir);
    LoadReport report;
    const Dataset dataset = load_csv(path, path.stem().string(), nullptr, &report);
    if (report.rows_dropped > 0) {
      merged.warnings.push_back(dataset.name() + ": dropped " +
                                std::to_string(report.rows_dropped) +
                                " row(s) with missing cells");
    }
    ExperimentResult part = evaluate_dataset(dataset, config);
    merged.records.insert(merged.records.end(), part.records.begin(), part.records.end());
    merged.runs.insert(merged.runs.end(), part.runs.begin(), part.runs.end());
    merged.warnings.insert(merged.warnings.end(), part.warnings.begin(), part.warnings.end());
    merged.exported_files.insert(merged.exported_files.end(), part.exported_files.begin(),
                                 part.exported_files.end());
    merged.fits += part.fits;
    merged.shifted_predictions += part.shifted_predictions;
  }
  std::sort(merged.records.begin(), merged.records.end(), record_less);
  if (!config.output_dir.empty()) emit_reports(merged, config.output_dir);
  return merged;
}

}  // namespace fsbench
