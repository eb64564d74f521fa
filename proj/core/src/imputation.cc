#include "fsbench/imputation.h"

#include <algorithm>
#include <map>

#include "fsbench/error.h"
#include "fsbench/rng.h"

namespace fsbench {

std::string_view to_string(ImputationStrategy strategy) {
  return strategy == ImputationStrategy::kMeanMode ? "mean_mode" : "random_empirical";
}

ImputationStrategy parse_imputation_strategy(std::string_view text) {
  if (text == "mean_mode" || text == "mean") return ImputationStrategy::kMeanMode;
  if (text == "random_empirical" || text == "random") {
    return ImputationStrategy::kRandomEmpirical;
  }
  throw Error("imputation.bad_strategy", "unknown imputation strategy '" + std::string(text) + "'");
}

ImputationRecipe fit_recipe(const Dataset& train, ImputationStrategy strategy) {
  ImputationRecipe recipe;
  recipe.strategy = strategy;
  recipe.schema = train.schema();
  for (std::size_t j = 0; j < train.num_features(); ++j) {
    const Column& column = train.column(j);
    FeatureFill fill;
    fill.kind = column.kind;
    if (column.kind == ColumnKind::kNumeric) {
      long double sum = 0.0L;
      for (double v : column.numeric) sum += v;
      const auto mean = static_cast<double>(sum / static_cast<long double>(column.numeric.size()));
      const auto [lo, hi] = std::minmax_element(column.numeric.begin(), column.numeric.end());
      fill.numeric = std::clamp(mean, *lo, *hi);
    } else {
      std::map<std::string, std::size_t> counts;
      for (const std::string& label : column.labels) ++counts[label];
      std::size_t best = 0;
      for (const auto& [label, count] : counts) {
        if (count > best) {
          best = count;
          fill.label = label;
        }
      }
    }
    recipe.fills.push_back(std::move(fill));
    if (strategy == ImputationStrategy::kRandomEmpirical) recipe.train_columns.push_back(column);
  }
  return recipe;
}

Dataset apply_imputation(const Dataset& test, std::span<const std::size_t> removed,
                         const ImputationRecipe& recipe, std::uint64_t seed) {
  const Schema schema = test.schema();
  if (schema.names != recipe.schema.names || schema.kinds != recipe.schema.kinds) {
    throw Error("imputation.schema_mismatch",
                "dataset '" + test.name() + "' does not match the recipe schema");
  }
  std::vector<Column> columns(test.columns().begin(), test.columns().end());
  const std::size_t rows = test.num_rows();
  for (std::size_t j : removed) {
    if (j >= test.num_features()) {
      throw Error("imputation.bad_feature", "removed index " + std::to_string(j) +
                                                " is not a feature of '" + test.name() + "'");
    }
    Column& column = columns[j];
    if (recipe.strategy == ImputationStrategy::kMeanMode) {
      const FeatureFill& fill = recipe.fills.at(j);
      if (column.kind == ColumnKind::kNumeric) {
        std::fill(column.numeric.begin(), column.numeric.end(), fill.numeric);
      } else {
        std::fill(column.labels.begin(), column.labels.end(), fill.label);
      }
    } else {
      const Column& source = recipe.train_columns.at(j);
      Rng rng(mix_seed(seed, j));
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t pick = rng.uniform_index(source.size());
        if (column.kind == ColumnKind::kNumeric) {
          column.numeric[r] = source.numeric[pick];
        } else {
          column.labels[r] = source.labels[pick];
        }
      }
    }
  }
  return Dataset(test.name(), std::move(columns), test.task());
}

}  // namespace fsbench
