#include "fsbench/shift.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "fsbench/error.h"
#include "fsbench/rng.h"

namespace fsbench {
namespace {

void check_degree(double degree) {
  if (!(degree >= 0.0 && degree <= 1.0)) {
    throw Error("shift.bad_degree", "degree must lie in [0, 1], got " + format_number(degree));
  }
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kSingle:
      return "single";
    case ScenarioKind::kMost:
      return "most";
    case ScenarioKind::kLeast:
      return "least";
    case ScenarioKind::kRandom:
      return "random";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "single") return ScenarioKind::kSingle;
  if (text == "most") return ScenarioKind::kMost;
  if (text == "least") return ScenarioKind::kLeast;
  if (text == "random") return ScenarioKind::kRandom;
  throw Error("shift.bad_scenario", "unknown task '" + std::string(text) +
                                        "' (expected single, least, most or random)");
}

std::size_t degree_to_count(double degree, std::size_t n) {
  check_degree(degree);
  if (n == 0) throw Error("shift.no_features", "feature count must be positive");
  const double scaled = std::floor(degree * static_cast<double>(n) + 0.5 + 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, scaled)));
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // C(n, i) is increasing in i for i <= n/2, so the running value can stop
  // as soon as it passes the limit.
  __extension__ using Wide = unsigned __int128;
  Wide value = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    value = value * (n - i) / (i + 1);
    if (value >= limit) return limit;
  }
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(value), limit);
}

std::vector<double> degree_grid(std::size_t n) {
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    grid.push_back(static_cast<double>(k) / static_cast<double>(n));
  }
  return grid;
}

ShiftPlan plan_single(const ImportanceRanking& ranking, std::size_t k) {
  const std::size_t n = ranking.num_features();
  if (k < 1 || k > n) {
    throw Error("shift.bad_index", "single-shift ordinal must lie in [1, " +
                                       std::to_string(n) + "], got " + std::to_string(k));
  }
  ShiftPlan plan;
  plan.scenario = {ScenarioKind::kSingle, 1.0 / static_cast<double>(n), k, 0};
  plan.num_features = n;
  plan.n_removed = 1;
  plan.subsets = {{ranking.order[k - 1]}};
  return plan;
}

ShiftPlan plan_ordered(const ImportanceRanking& ranking, double degree,
                       ScenarioKind direction) {
  if (direction != ScenarioKind::kMost && direction != ScenarioKind::kLeast) {
    throw Error("shift.bad_scenario", "ordered plans take direction most or least");
  }
  const std::size_t n = ranking.num_features();
  const std::size_t count = degree_to_count(degree, n);
  FeatureSubset subset;
  if (direction == ScenarioKind::kLeast) {
    subset.assign(ranking.order.begin(),
                  ranking.order.begin() + static_cast<std::ptrdiff_t>(count));
  } else {
    subset.assign(ranking.order.rbegin(),
                  ranking.order.rbegin() + static_cast<std::ptrdiff_t>(count));
  }
  std::sort(subset.begin(), subset.end());

  ShiftPlan plan;
  plan.scenario = {direction, degree, 0, 0};
  plan.num_features = n;
  plan.n_removed = count;
  plan.subsets = {std::move(subset)};
  return plan;
}

std::vector<FeatureSubset> enumerate_combinations(std::size_t n, std::size_t k) {
  std::vector<FeatureSubset> out;
  if (k > n) return out;
  FeatureSubset current(k);
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    out.push_back(current);
    // Advance the rightmost index that still has room.
    std::size_t i = k;
    while (i > 0 && current[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

ShiftPlan plan_random(std::size_t num_features, double degree, std::uint64_t seed,
                      std::size_t cap) {
  if (cap == 0) throw Error("shift.bad_cap", "combination cap must be positive");
  const std::size_t count = degree_to_count(degree, num_features);
  ShiftPlan plan;
  plan.scenario = {ScenarioKind::kRandom, degree, 0, seed};
  plan.num_features = num_features;
  plan.n_removed = count;
  plan.combination_cap = cap;

  const std::uint64_t total = binomial_capped(num_features, count, cap + 1ULL);
  if (total <= cap) {
    plan.subsets = enumerate_combinations(num_features, count);
    return plan;
  }

  // Rejection sampling: draw a uniform k-subset by partial Fisher-Yates,
  // keep it if unseen.
  Rng rng(seed);
  std::set<FeatureSubset> seen;
  std::vector<std::size_t> pool(num_features);
  while (seen.size() < cap) {
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_index(num_features - i);
      std::swap(pool[i], pool[j]);
    }
    FeatureSubset subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(subset.begin(), subset.end());
    seen.insert(std::move(subset));
  }
  plan.subsets.assign(seen.begin(), seen.end());
  return plan;
}

std::string plan_to_json(const ShiftPlan& plan) {
  nlohmann::ordered_json j;
  j["scenario"] = std::string(to_string(plan.scenario.kind));
  j["degree"] = plan.scenario.degree;
  if (plan.scenario.kind == ScenarioKind::kSingle) j["single_index"] = plan.scenario.single_index;
  j["seed"] = plan.scenario.seed;
  j["num_features"] = plan.num_features;
  j["n_removed"] = plan.n_removed;
  j["combination_cap"] = plan.combination_cap;
  j["subsets"] = plan.subsets;
  return j.dump();
}

}  // namespace fsbench
