// Randomized invariant checks across modules.
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "fsbench/evaluation.h"
#include "fsbench/importance.h"
#include "fsbench/imputation.h"
#include "fsbench/models.h"
#include "fsbench/shift.h"
#include "support.h"

namespace fsbench {
namespace {

using testing::label_column;
using testing::numeric_column;

std::vector<double> noise(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform_unit() * 6 - 3;
  return v;
}

TEST(Property, PearsonSymmetricAndAffineInvariant) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 3 + rng.uniform_index(60);
    const auto x = noise(rng, n);
    const auto y = noise(rng, n);
    const double r = pearson(x, y).value;
    EXPECT_NEAR(pearson(y, x).value, r, 1e-12);
    const double a = 0.1 + rng.uniform_unit() * 5, b = rng.uniform_unit() * 10 - 5;
    std::vector<double> ax(n), neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      ax[i] = a * x[i] + b;
      neg[i] = -a * x[i] + b;
    }
    EXPECT_NEAR(pearson(ax, y).value, r, 1e-12);
    EXPECT_NEAR(pearson(neg, y).value, -r, 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
  }
}

TEST(Property, SpearmanInvariantUnderMonotoneTransform) {
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng.uniform_index(40);
    const auto x = noise(rng, n);
    const auto y = noise(rng, n);
    std::vector<double> fx(n);
    for (std::size_t i = 0; i < n; ++i) fx[i] = std::exp(x[i]) + x[i] * x[i] * x[i];
    EXPECT_NEAR(spearman(fx, y).value, spearman(x, y).value, 1e-12);
  }
}

TEST(Property, RankOrderInvariantUnderPositiveRescaling) {
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    const Dataset d = testing::synthetic_regression(50 + rng.uniform_index(50), t);
    const auto before = rank_features(d).order;
    std::vector<Column> columns(d.columns().begin(), d.columns().end());
    for (std::size_t j = 0; j < d.num_features(); ++j) {
      const double a = 0.5 + rng.uniform_unit() * 100, b = rng.uniform_unit() * 50;
      for (double& v : columns[j].numeric) v = a * v + b;
    }
    const Dataset scaled("scaled", std::move(columns), d.task());
    EXPECT_EQ(rank_features(scaled).order, before);
  }
}

TEST(Property, MutualInformationOfSelfIsBinnedEntropy) {
  Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    const auto x = noise(rng, 10 + rng.uniform_index(60));
    const auto bins = equal_width_bins(x, 10);
    std::vector<double> codes(bins.begin(), bins.end());
    std::vector<double> counts(10, 0.0);
    for (std::size_t b : bins) counts[b] += 1;
    double h = 0;
    for (double c : counts) {
      if (c > 0) h -= c / x.size() * std::log(c / x.size());
    }
    MutualInformationOptions o;
    o.y = Discretization::kBinned;
    EXPECT_NEAR(mutual_information(x, x, o), h, 1e-12);
    EXPECT_GE(mutual_information(x, noise(rng, x.size()), o), 0.0);
  }
}

TEST(Property, KendallBounded) {
  Rng rng(25);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.uniform_index(30);
    std::vector<std::size_t> a(n), b(n);
    std::iota(a.begin(), a.end(), 0);
    b = a;
    rng.shuffle(a);
    rng.shuffle(b);
    EXPECT_LE(std::abs(kendall_tau(a, b)), 1.0);
    EXPECT_EQ(kendall_tau(a, a), 1.0);
    std::vector<std::size_t> rev(a.rbegin(), a.rend());
    EXPECT_EQ(kendall_tau(a, rev), -1.0);
  }
}

TEST(Property, MostAndLeastComplementsPartitionFeatures) {
  const Dataset d = testing::synthetic_wide(40, 11, 1);
  const ImportanceRanking r = rank_features(d);
  for (std::size_t k = 0; k <= 11; ++k) {
    const double deg = static_cast<double>(k) / 11.0;
    const auto most = plan_ordered(r, deg, ScenarioKind::kMost).subsets.at(0);
    const auto least = plan_ordered(r, 1.0 - deg, ScenarioKind::kLeast).subsets.at(0);
    std::set<std::size_t> all(most.begin(), most.end());
    all.insert(least.begin(), least.end());
    EXPECT_EQ(all.size(), 11u);
    EXPECT_EQ(most.size() + least.size(), 11u);
  }
}

TEST(Property, PlanRandomSeedIndependentWhenEnumerated) {
  for (std::size_t n : {4u, 8u, 11u}) {
    for (double d : degree_grid(n)) {
      EXPECT_EQ(plan_random(n, d, 1).subsets, plan_random(n, d, 99).subsets);
    }
  }
}

TEST(Property, ImputationIdentityIdempotenceAndHull) {
  Rng rng(26);
  const Dataset base = testing::synthetic_binary(120, 3);
  for (int t = 0; t < 20; ++t) {
    const DataSplit s = split(base, 0.8, t);
    const ImputationRecipe r = fit_recipe(s.train);
    std::vector<std::size_t> removed;
    for (std::size_t j = 0; j < 3; ++j) {
      if (rng.uniform_index(2)) removed.push_back(j);
    }
    const Dataset once = apply_imputation(s.test, removed, r);
    EXPECT_EQ(once.num_rows(), s.test.num_rows());
    EXPECT_EQ(once.num_columns(), s.test.num_columns());
    EXPECT_TRUE(apply_imputation(once, removed, r).same_content(once));
    for (std::size_t j : removed) {
      const Column& c = once.column(j);
      const Column& train = s.train.column(j);
      if (c.kind == ColumnKind::kNumeric) {
        for (double v : c.numeric) ASSERT_EQ(v, r.fills[j].numeric);
        const double train_mean =
            std::accumulate(train.numeric.begin(), train.numeric.end(), 0.0) / train.numeric.size();
        EXPECT_NEAR(r.fills[j].numeric, train_mean, 1e-12);
        const auto [lo, hi] = std::minmax_element(train.numeric.begin(), train.numeric.end());
        EXPECT_GE(r.fills[j].numeric, *lo);
        EXPECT_LE(r.fills[j].numeric, *hi);
      } else {
        EXPECT_EQ(std::set<std::string>(c.labels.begin(), c.labels.end()),
                  std::set<std::string>{r.fills[j].label});
        EXPECT_NE(std::find(train.labels.begin(), train.labels.end(), r.fills[j].label),
                  train.labels.end());
      }
    }
  }
}

class ModelProperty : public ::testing::TestWithParam<const char*> {};

TEST_P(ModelProperty, PermutationEquivariance) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 5);
  const auto model = fit_model(parse_model_spec(GetParam()), s.train);
  std::vector<std::size_t> perm(s.test.num_rows());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(3);
  rng.shuffle(perm);
  const auto base = model->predict(s.test);
  const auto permuted = model->predict(s.test.select_rows(perm));
  for (std::size_t i = 0; i < perm.size(); ++i) {
    EXPECT_EQ(permuted[i].probabilities, base[perm[i]].probabilities);
    EXPECT_EQ(permuted[i].label, base[perm[i]].label);
  }
}

INSTANTIATE_TEST_SUITE_P(InRepo, ModelProperty,
                         ::testing::Values("majority", "logistic", "knn", "cart",
                                           "boosted_stumps"));

class RelabelProperty : public ::testing::TestWithParam<const char*> {};

TEST_P(RelabelProperty, LabelRemapEquivariance) {
  // Reverse the sorted label order: setosa->z3, versicolor->z2, virginica->z1.
  const Dataset iris = testing::load_iris();
  Column target = iris.target();
  for (std::string& l : target.labels) {
    l = l == "setosa" ? "z3" : (l == "versicolor" ? "z2" : "z1");
  }
  std::vector<Column> columns(iris.columns().begin(), iris.columns().end());
  columns.back() = target;
  const Dataset relabeled("relabeled", std::move(columns), iris.task());
  // Same rows on both sides; only the label names differ.
  const DataSplit a = split(iris, 0.8, 1);
  const Dataset b_train = relabeled.select_rows(a.train_rows);
  const Dataset b_test = relabeled.select_rows(a.test_rows);
  const auto pa = fit_model(parse_model_spec(GetParam()), a.train)->predict(a.test);
  const auto pb = fit_model(parse_model_spec(GetParam()), b_train)->predict(b_test);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pb[i].label, 2 - pa[i].label) << i;
}

INSTANTIATE_TEST_SUITE_P(InRepo, RelabelProperty, ::testing::Values("knn", "cart"));

TEST(Property, AucInvariantUnderIncreasingTransform) {
  Rng rng(27);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 4 + rng.uniform_index(40);
    std::vector<std::vector<double>> s(n, std::vector<double>(2)), f(n, std::vector<double>(2));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i][1] = rng.uniform_unit();
      s[i][0] = 1 - s[i][1];
      f[i][1] = std::pow(s[i][1], 3) * 7 + 1;
      f[i][0] = 0;
      labels[i] = static_cast<int>(rng.uniform_index(2));
    }
    labels[0] = 0;
    labels[1] = 1;
    EXPECT_NEAR(roc_auc(s, labels, 2).value, roc_auc(f, labels, 2).value, 1e-15);
  }
}

TEST(Property, AccuracyPlusErrorIsOne) {
  Rng rng(28);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.uniform_index(50);
    std::vector<int> p(n), y(n);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng.uniform_index(3));
      y[i] = static_cast<int>(rng.uniform_index(3));
      errors += p[i] != y[i];
    }
    EXPECT_NEAR(accuracy(p, y) + static_cast<double>(errors) / n, 1.0, 1e-15);
  }
}

TEST(Property, RanksConserveSumWithinACell) {
  Rng rng(29);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng.uniform_index(8);
    std::vector<double> v(m);
    for (double& x : v) x = static_cast<double>(rng.uniform_index(4));
    const auto ranks = average_ranks(v, rng.uniform_index(2) == 0);
    EXPECT_DOUBLE_EQ(std::accumulate(ranks.begin(), ranks.end(), 0.0), m * (m + 1) / 2.0);
  }
}

TEST(Property, BucketMeansRecombineToGlobalMean) {
  Rng rng(30);
  std::vector<EvalRecord> records;
  for (int i = 0; i < 500; ++i) {
    EvalRecord r;
    r.dataset = "d" + std::to_string(rng.uniform_index(3));
    r.model = "m";
    r.scenario = ScenarioKind::kMost;
    r.degree = static_cast<double>(rng.uniform_index(11)) / 10.0;
    r.delta = rng.uniform_unit() - 0.5;
    records.push_back(r);
  }
  double total = 0, weighted = 0;
  for (const EvalRecord& r : records) total += r.delta;
  std::size_t count = 0;
  for (const GapCell& c : bucket_degrees(records)) {
    weighted += c.mean_delta * c.count;
    count += c.count;
  }
  EXPECT_EQ(count, records.size());
  EXPECT_NEAR(weighted / count, total / records.size(), 1e-12);
}

TEST(Property, EncodeNeverRemapsTrainLabels) {
  const Dataset d = testing::synthetic_binary(100, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DataSplit s = split(d, 0.8, seed);
    const Encoder enc = Encoder::fit(s.train);
    const EncodedData train = enc.transform(s.train);
    const EncodedData test = enc.transform(s.test);
    const auto& map = *enc.feature_map(2);
    for (std::size_t r = 0; r < s.test.num_rows(); ++r) {
      const std::string& label = s.test.column(2).labels[r];
      if (map.contains(label)) EXPECT_EQ(test.features(r, 2), map.code(label));
    }
    EXPECT_EQ(train.unknown_feature_cells, 0u);
  }
}

}  // namespace
}  // namespace fsbench
