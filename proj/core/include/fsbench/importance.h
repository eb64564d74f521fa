#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/dataset.h"

namespace fsbench {

enum class ImportanceMethod { kPearson, kSpearman, kMutualInformation };

std::string_view to_string(ImportanceMethod method);
ImportanceMethod parse_importance_method(std::string_view text);

// Features with |rho| above this are flagged as strongly correlated.
inline constexpr double kStrongCorrelation = 0.7;
inline constexpr std::size_t kDefaultMiBins = 10;

struct Correlation {
  double value = 0.0;
  // Set when either input has zero variance; value is then 0.
  bool degenerate = false;
};

// Population-moment Pearson correlation, clamped to [-1, 1].
Correlation pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of fractional (tie-averaged) ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> values);

enum class Discretization {
  kBinned,  // equal-width bins over [min, max]
  kAsIs,    // values are already category codes
};

struct MutualInformationOptions {
  std::size_t bins = kDefaultMiBins;
  Discretization x = Discretization::kBinned;
  Discretization y = Discretization::kAsIs;
};

// Plug-in mutual information in nats of the discretized pair.
double mutual_information(std::span<const double> x, std::span<const double> y,
                          const MutualInformationOptions& options = {});

// Equal-width bin index of every value. A constant input maps to bin 0.
std::vector<std::size_t> equal_width_bins(std::span<const double> values,
                                          std::size_t bins);

struct FeatureScore {
  std::size_t feature_index = 0;
  std::string name;
  double rho = 0.0;
  double abs_rho = 0.0;
  ImportanceMethod method = ImportanceMethod::kPearson;
  bool degenerate = false;
  bool strong = false;
};

struct ImportanceRanking {
  ImportanceMethod method = ImportanceMethod::kPearson;
  // Indexed by feature.
  std::vector<FeatureScore> scores;
  // Feature indices sorted by ascending abs_rho, ties by index.
  std::vector<std::size_t> order;

  std::size_t num_features() const { return scores.size(); }
  std::vector<std::size_t> strong_features() const;
  std::vector<std::size_t> degenerate_features() const;
};

// Scores every feature of `train` against its target. Categorical features
// and classification targets use sorted-label integer codes.
ImportanceRanking rank_features(const Dataset& train,
                                ImportanceMethod method = ImportanceMethod::kPearson,
                                std::size_t mi_bins = kDefaultMiBins);

// Sorts by abs_rho ascending, ties by feature index.
std::vector<std::size_t> ascending_order(std::span<const FeatureScore> scores);

// Kendall tau-a between two orderings of the same index set.
double kendall_tau(std::span<const std::size_t> rank_a,
                   std::span<const std::size_t> rank_b);

inline constexpr std::array<ImportanceMethod, 3> kConcordanceMethods = {
    ImportanceMethod::kPearson, ImportanceMethod::kSpearman,
    ImportanceMethod::kMutualInformation};

struct Concordance {
  std::array<ImportanceRanking, 3> rankings;
  // tau[i][j] between kConcordanceMethods[i] and [j].
  std::array<std::array<double, 3>, 3> tau{};
};

Concordance concordance(const Dataset& train, std::size_t mi_bins = kDefaultMiBins);

// feature,rho,abs_rho,rank (rank is the 1-based position in `order`).
void write_ranking_csv(const ImportanceRanking& ranking,
                       const std::filesystem::path& path);
// Square Pearson matrix over every encoded column, target included.
void write_correlation_matrix_csv(const Dataset& dataset,
                                  const std::filesystem::path& path);
void write_concordance_csv(const Concordance& concordance,
                           const std::filesystem::path& path);

}  // namespace fsbench
