#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/dataset.h"

namespace fsbench {

enum class ImputationStrategy {
  kMeanMode,         // train mean (numeric) or train mode (categorical)
  kRandomEmpirical,  // i.i.d. draws from the train column
};

std::string_view to_string(ImputationStrategy strategy);
ImputationStrategy parse_imputation_strategy(std::string_view text);

struct FeatureFill {
  ColumnKind kind = ColumnKind::kNumeric;
  double numeric = 0.0;
  std::string label;
};

// Per-feature fills fitted on a train split.
struct ImputationRecipe {
  ImputationStrategy strategy = ImputationStrategy::kMeanMode;
  Schema schema;
  std::vector<FeatureFill> fills;
  // Train feature columns, kept for kRandomEmpirical resampling.
  std::vector<Column> train_columns;
};

// Numeric fill is the arithmetic mean kept inside [min, max] of the column;
// categorical fill is the most frequent label, ties to the smallest label.
ImputationRecipe fit_recipe(const Dataset& train,
                            ImputationStrategy strategy = ImputationStrategy::kMeanMode);

// Copy of `test` whose `removed` feature columns are overwritten per the
// recipe. `seed` only matters for kRandomEmpirical.
Dataset apply_imputation(const Dataset& test, std::span<const std::size_t> removed,
                         const ImputationRecipe& recipe, std::uint64_t seed = 0);

}  // namespace fsbench
