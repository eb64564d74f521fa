#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/dataset.h"
#include "fsbench/imputation.h"

namespace fsbench {

enum class ModelKind {
  kMajorityOrMean,
  kLinear,
  kLogistic,
  kKnn,
  kCart,
  kBoostedStumps,
  kExternal,
};

std::string_view to_string(ModelKind kind);

struct ModelSpec {
  std::string name;
  ModelKind kind = ModelKind::kCart;
  // Overrides of the learner defaults, e.g. {"k", 3}.
  std::map<std::string, double> hyperparameters;
  std::uint64_t seed = 0;
  // Shell command for kExternal.
  std::string command;

  double param(std::string_view key, double fallback) const;
};

// "cart", "knn:k=3", "boosted_stumps:rounds=50,shrinkage=0.2", "ext:<cmd>".
ModelSpec parse_model_spec(std::string_view text);

// linear is regression-only, logistic classification-only; the rest do both.
bool supports(ModelKind kind, TaskKind task);

// The in-repo learners, in registry order.
std::vector<ModelKind> builtin_models();
std::vector<ModelKind> builtin_models(TaskKind task);

struct Prediction {
  // Regression output; for classification the predicted code as a double.
  double value = 0.0;
  // Predicted class code; -1 for regression.
  int label = -1;
  // One entry per train class, on the simplex.
  std::vector<double> probabilities;
};

// A fitted learner over encoded matrices. Immutable once fitted, so predict
// may be called concurrently.
class Estimator {
 public:
  virtual ~Estimator() = default;

  // Throws on a column-count mismatch with the training matrix.
  std::vector<Prediction> predict(const Matrix& rows) const;

  std::size_t num_features() const { return num_features_; }
  TaskKind task() const { return task_; }
  std::size_t num_classes() const { return num_classes_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 protected:
  Estimator(std::size_t num_features, TaskKind task, std::size_t num_classes)
      : num_features_(num_features), task_(task), num_classes_(num_classes) {}

  virtual Prediction predict_row(std::span<const double> row) const = 0;

  std::vector<std::string> warnings_;

 private:
  std::size_t num_features_;
  TaskKind task_;
  std::size_t num_classes_;
};

// `targets` holds regression values or class codes in [0, num_classes).
std::unique_ptr<Estimator> fit_estimator(const ModelSpec& spec, const Matrix& features,
                                         std::span<const double> targets, TaskKind task,
                                         std::size_t num_classes);

// Argmax with ties resolved to the lowest code.
int argmax_label(std::span<const double> probabilities);

struct BridgeOptions {
  std::chrono::seconds timeout{600};
  // Directory for bridge exchange files; a fresh temporary directory when
  // empty.
  std::filesystem::path workdir;
};

// Dataset-level model: owns the train encoding (or, for external models,
// the train table) and predicts raw rows. Labels are train-class codes in
// sorted label order.
class TrainedModel {
 public:
  virtual ~TrainedModel() = default;

  // Only the feature columns of `rows` are read.
  virtual std::vector<Prediction> predict(const Dataset& rows) const = 0;
  virtual const std::vector<std::string>& warnings() const = 0;
  // False for external programs, which are run one at a time.
  virtual bool concurrent_predict() const { return true; }

  const ModelSpec& spec() const { return spec_; }
  const std::vector<std::string>& classes() const { return classes_; }
  TaskKind task() const { return task_; }

 protected:
  TrainedModel(ModelSpec spec, std::vector<std::string> classes, TaskKind task)
      : spec_(std::move(spec)), classes_(std::move(classes)), task_(task) {}

 private:
  ModelSpec spec_;
  std::vector<std::string> classes_;
  TaskKind task_;
};

std::shared_ptr<const TrainedModel> fit_model(const ModelSpec& spec, const Dataset& train,
                                              const BridgeOptions& bridge = {});

// Trains on the train split with `removed` columns imputed by the train
// recipe, i.e. on the same representation the shifted test rows will have.
std::shared_ptr<const TrainedModel> fit_upper_bound(
    const ModelSpec& spec, const DataSplit& split, std::span<const std::size_t> removed,
    ImputationStrategy strategy = ImputationStrategy::kMeanMode,
    const BridgeOptions& bridge = {});

}  // namespace fsbench
