#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/importance.h"

namespace fsbench {

enum class ScenarioKind { kSingle, kMost, kLeast, kRandom };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view text);

struct Scenario {
  ScenarioKind kind = ScenarioKind::kRandom;
  // Fraction of features removed; unused for kSingle.
  double degree = 0.0;
  // 1-based position in the ascending-|rho| order; kSingle only.
  std::size_t single_index = 0;
  // kRandom only.
  std::uint64_t seed = 0;
};

// Sorted feature indices.
using FeatureSubset = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultCombinationCap = 10000;

struct ShiftPlan {
  Scenario scenario;
  std::size_t num_features = 0;
  std::size_t n_removed = 0;
  std::size_t combination_cap = kDefaultCombinationCap;
  std::vector<FeatureSubset> subsets;
};

// round-half-up(degree * n), clamped to [0, n].
std::size_t degree_to_count(double degree, std::size_t n);

// min(C(n, k), limit), computed without overflow.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t limit);

// {1/n, 2/n, ..., 1}.
std::vector<double> degree_grid(std::size_t n);

ShiftPlan plan_single(const ImportanceRanking& ranking, std::size_t k);

// direction is kMost (top-|rho| prefix) or kLeast (bottom-|rho| prefix).
ShiftPlan plan_ordered(const ImportanceRanking& ranking, double degree,
                       ScenarioKind direction);

// All C(n, k) subsets in lexicographic order when that count is <= cap,
// otherwise `cap` distinct subsets drawn uniformly (reported in
// lexicographic order).
ShiftPlan plan_random(std::size_t num_features, double degree, std::uint64_t seed,
                      std::size_t cap = kDefaultCombinationCap);

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<FeatureSubset> enumerate_combinations(std::size_t n, std::size_t k);

std::string plan_to_json(const ShiftPlan& plan);

}  // namespace fsbench
