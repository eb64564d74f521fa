#include "fsbench/models.h"

#include <algorithm>
#include <charconv>

#include "fsbench/bridge.h"
#include "fsbench/error.h"

namespace fsbench {
namespace {

struct Registered {
  std::string_view name;
  ModelKind kind;
};

constexpr Registered kRegistry[] = {
    {"majority_or_mean", ModelKind::kMajorityOrMean},
    {"linear", ModelKind::kLinear},
    {"logistic", ModelKind::kLogistic},
    {"knn", ModelKind::kKnn},
    {"cart", ModelKind::kCart},
    {"boosted_stumps", ModelKind::kBoostedStumps},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

class InRepoModel final : public TrainedModel {
 public:
  InRepoModel(ModelSpec spec, Encoder encoder, std::unique_ptr<Estimator> estimator,
              TaskKind task)
      : TrainedModel(std::move(spec), encoder.classes(), task),
        encoder_(std::move(encoder)),
        estimator_(std::move(estimator)) {}

  std::vector<Prediction> predict(const Dataset& rows) const override {
    return estimator_->predict(encoder_.transform(rows).features);
  }

  const std::vector<std::string>& warnings() const override {
    return estimator_->warnings();
  }

 private:
  Encoder encoder_;
  std::unique_ptr<Estimator> estimator_;
};

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const Registered& r : kRegistry) {
    if (r.kind == kind) return r.name;
  }
  return "external";
}

double ModelSpec::param(std::string_view key, double fallback) const {
  auto it = hyperparameters.find(std::string(key));
  return it == hyperparameters.end() ? fallback : it->second;
}

ModelSpec parse_model_spec(std::string_view text) {
  text = trim(text);
  ModelSpec spec;
  if (text.starts_with("ext:")) {
    spec.kind = ModelKind::kExternal;
    spec.command = std::string(trim(text.substr(4)));
    if (spec.command.empty()) {
      throw Error("model.bad_spec", "external model needs a command after 'ext:'");
    }
    spec.name = "ext:" + spec.command;
    return spec;
  }
  const std::size_t colon = text.find(':');
  std::string_view base = trim(text.substr(0, colon));
  if (base == "majority" || base == "mean") base = "majority_or_mean";
  if (base == "stumps") base = "boosted_stumps";
  const auto it = std::find_if(std::begin(kRegistry), std::end(kRegistry),
                               [&](const Registered& r) { return r.name == base; });
  if (it == std::end(kRegistry)) {
    throw Error("model.unknown", "unknown model '" + std::string(base) + "'");
  }
  spec.kind = it->kind;
  spec.name = std::string(text);
  if (colon == std::string_view::npos) return spec;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error("model.bad_spec", "expected key=value in '" + std::string(item) + "'");
    }
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = trim(item.substr(eq + 1));
    const auto parsed = parse_number(value);
    if (!parsed) {
      throw Error("model.bad_spec", "hyperparameter '" + std::string(key) +
                                        "' has non-numeric value '" + std::string(value) + "'");
    }
    if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(*parsed);
    } else {
      spec.hyperparameters[std::string(key)] = *parsed;
    }
  }
  return spec;
}

bool supports(ModelKind kind, TaskKind task) {
  if (kind == ModelKind::kLinear) return task == TaskKind::kRegression;
  if (kind == ModelKind::kLogistic) return task != TaskKind::kRegression;
  return true;
}

std::vector<ModelKind> builtin_models() {
  std::vector<ModelKind> out;
  for (const Registered& r : kRegistry) out.push_back(r.kind);
  return out;
}

std::vector<ModelKind> builtin_models(TaskKind task) {
  std::vector<ModelKind> out;
  for (const Registered& r : kRegistry) {
    if (supports(r.kind, task)) out.push_back(r.kind);
  }
  return out;
}

std::shared_ptr<const TrainedModel> fit_model(const ModelSpec& spec, const Dataset& train,
                                              const BridgeOptions& bridge) {
  if (spec.kind == ModelKind::kExternal) return make_external_model(spec, train, bridge);
  Encoder encoder = Encoder::fit(train);
  const EncodedData data = encoder.transform(train);
  auto estimator = fit_estimator(spec, data.features, data.targets, train.task(),
                                 encoder.num_classes());
  return std::make_shared<InRepoModel>(spec, std::move(encoder), std::move(estimator),
                                       train.task());
}

std::shared_ptr<const TrainedModel> fit_upper_bound(const ModelSpec& spec,
                                                    const DataSplit& split,
                                                    std::span<const std::size_t> removed,
                                                    ImputationStrategy strategy,
                                                    const BridgeOptions& bridge) {
  const ImputationRecipe recipe = fit_recipe(split.train, strategy);
  const Dataset shifted_train = apply_imputation(split.train, removed, recipe, split.seed);
  return fit_model(spec, shifted_train, bridge);
}

}  // namespace fsbench
