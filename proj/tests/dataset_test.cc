#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "fsbench/dataset.h"
#include "fsbench/imputation.h"
#include "support.h"

namespace fsbench {
namespace {

using testing::label_column;
using testing::numeric_column;
using testing::TempDir;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

TEST(Dataset, LoadsIrisWithInferredSchema) {
  const Dataset iris = testing::load_iris();
  EXPECT_EQ(iris.num_rows(), 150u);
  EXPECT_EQ(iris.num_features(), 4u);
  EXPECT_EQ(iris.task(), TaskKind::kMulticlass);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(iris.column(j).kind, ColumnKind::kNumeric);
  EXPECT_EQ(iris.target().kind, ColumnKind::kCategorical);
}

TEST(Dataset, InferSchemaRequiresEveryValueNumeric) {
  const auto kinds = infer_schema({{"1", "2.5", "-3"}, {"1", "x", "3"}, {"1e3", "+2", "0"}});
  EXPECT_EQ(kinds, (std::vector{ColumnKind::kNumeric, ColumnKind::kCategorical,
                                ColumnKind::kNumeric}));
}

TEST(Dataset, TaskDerivation) {
  EXPECT_EQ(derive_task(label_column("t", {"a", "b", "a"})), TaskKind::kBinary);
  EXPECT_EQ(derive_task(label_column("t", {"a", "b", "c"})), TaskKind::kMulticlass);
  EXPECT_EQ(derive_task(numeric_column("t", {0, 1, 0})), TaskKind::kRegression);
}

TEST(Dataset, DropsRowsWithMissingCells) {
  TempDir dir;
  write_file(dir / "m.csv", "a,b,y\n1,x,p\nNA,x,q\n2,?,p\n3,y,q\n4,z,\n5,x,p\n");
  LoadReport report;
  const Dataset d = load_csv(dir / "m.csv", "m", nullptr, &report);
  EXPECT_EQ(report.rows_read, 6u);
  EXPECT_EQ(report.rows_dropped, 3u);
  EXPECT_EQ(d.num_rows(), 3u);
  EXPECT_EQ(d.column(0).numeric, (std::vector<double>{1, 3, 5}));
}

TEST(Dataset, RaggedRowIsAnError) {
  TempDir dir;
  write_file(dir / "r.csv", "a,b,y\n1,2,p\n1,2\n");
  EXPECT_ERROR_CODE(load_csv(dir / "r.csv", "r"), "dataset.ragged_rows");
}

TEST(Dataset, RejectsOneColumnAndEmptyTables) {
  TempDir dir;
  write_file(dir / "one.csv", "y\n1\n2\n");
  EXPECT_ERROR_CODE(load_csv(dir / "one.csv", "one"), "dataset.too_few_columns");
  write_file(dir / "empty.csv", "a,y\nNA,1\n");
  EXPECT_ERROR_CODE(load_csv(dir / "empty.csv", "empty"), "dataset.no_rows");
}

TEST(Dataset, SchemaOverridesInference) {
  TempDir dir;
  write_file(dir / "s.csv", "code,y\n1,a\n2,b\n");
  Schema schema{{"code", "y"}, {ColumnKind::kCategorical, ColumnKind::kCategorical},
                TaskKind::kBinary};
  const Dataset d = load_csv(dir / "s.csv", "s", &schema);
  EXPECT_EQ(d.column(0).kind, ColumnKind::kCategorical);
  schema.names[0] = "other";
  EXPECT_ERROR_CODE(load_csv(dir / "s.csv", "s", &schema), "dataset.schema_mismatch");
}

TEST(Dataset, ConstructorValidatesTaskAgainstTarget) {
  EXPECT_ERROR_CODE(Dataset("d", {numeric_column("x", {1, 2}), numeric_column("y", {1, 2})},
                            TaskKind::kBinary),
                    "dataset.task_mismatch");
  EXPECT_ERROR_CODE(Dataset("d", {numeric_column("x", {1, 2}), numeric_column("y", {1})},
                            TaskKind::kRegression),
                    "dataset.ragged_rows");
}

TEST(Dataset, CsvWriteReadRoundTrip) {
  TempDir dir;
  const Dataset original = testing::synthetic_binary(40, 3);
  write_csv(original, dir / "rt.csv");
  const Schema schema = original.schema();
  const Dataset back = load_csv(dir / "rt.csv", "other", &schema);
  EXPECT_TRUE(back.same_content(original));
}

class SplitTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SplitTest, PartitionsRowsAndStratifies) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, GetParam());
  EXPECT_TRUE(s.stratified);
  EXPECT_EQ(s.train.num_rows(), 120u);
  EXPECT_EQ(s.test.num_rows(), 30u);
  std::vector<std::size_t> all = s.train_rows;
  all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(150);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
  EXPECT_TRUE(std::is_sorted(s.train_rows.begin(), s.train_rows.end()));
  std::map<std::string, int> test_counts;
  for (const auto& label : s.test.target().labels) ++test_counts[label];
  for (const auto& [label, count] : test_counts) EXPECT_EQ(count, 10) << label;
}

TEST_P(SplitTest, SameSeedSameSplit) {
  const Dataset d = testing::synthetic_regression(97, 1);
  const DataSplit a = split(d, 0.7, GetParam());
  const DataSplit b = split(d, 0.7, GetParam());
  EXPECT_EQ(a.train_rows, b.train_rows);
  EXPECT_EQ(a.train.num_rows(), 67u);
  EXPECT_FALSE(a.stratified);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SplitTest, ::testing::Values(0, 1, 42, 2024));

TEST(Split, DifferentSeedsDiffer) {
  const Dataset iris = testing::load_iris();
  EXPECT_NE(split(iris, 0.8, 1).train_rows, split(iris, 0.8, 2).train_rows);
}

TEST(Split, NameDoesNotAffectSplit) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  const DataSplit again = split(iris.renamed("x"), 0.8, 0);
  EXPECT_EQ(s.test_rows, again.test_rows);
}

TEST(Split, SingletonClassFallsBackToUnstratified) {
  const Dataset d("d",
                  {numeric_column("x", {1, 2, 3, 4, 5, 6}),
                   label_column("y", {"a", "a", "a", "b", "b", "c"})},
                  TaskKind::kMulticlass);
  const DataSplit s = split(d, 0.5, 0);
  EXPECT_FALSE(s.stratified);
  EXPECT_FALSE(s.warnings.empty());
  EXPECT_EQ(s.train.num_rows(), 3u);
}

TEST(Split, BadFraction) {
  const Dataset iris = testing::load_iris();
  EXPECT_ERROR_CODE(split(iris, 0.0, 0), "split.bad_fraction");
  EXPECT_ERROR_CODE(split(iris, 1.0, 0), "split.bad_fraction");
}

TEST(Encode, SortedLabelCodes) {
  const Dataset d("d",
                  {label_column("c", {"red", "blue", "green", "blue"}),
                   label_column("y", {"z", "a", "m", "a"})},
                  TaskKind::kMulticlass);
  const EncodedDataset e = encode(d);
  EXPECT_EQ(e.data.features.column(0), (std::vector<double>{2, 0, 1, 0}));
  EXPECT_EQ(e.data.labels, (std::vector<int>{2, 0, 1, 0}));
  EXPECT_EQ(e.encoder.classes(), (std::vector<std::string>{"a", "m", "z"}));
}

TEST(Encode, UnknownCategoriesMapToReservedCode) {
  const Dataset train("t", {label_column("c", {"a", "b"}), label_column("y", {"p", "q"})},
                      TaskKind::kBinary);
  const Dataset test("s", {label_column("c", {"b", "zz"}), label_column("y", {"q", "r"})},
                     TaskKind::kMulticlass);
  const Encoder enc = Encoder::fit(train);
  const Dataset test_binary("s", {label_column("c", {"b", "zz"}), label_column("y", {"q", "p"})},
                            TaskKind::kBinary);
  const EncodedData out = enc.transform(test_binary);
  EXPECT_EQ(out.features(1, 0), 2.0);
  EXPECT_EQ(out.unknown_feature_cells, 1u);
  EXPECT_EQ(enc.transform(test).unknown_targets, 1u);
  const Dataset renamed("s", {label_column("other", {"b"}), label_column("y", {"q"})},
                        TaskKind::kBinary);
  EXPECT_ERROR_CODE(enc.transform(renamed), "encode.schema_mismatch");
}

TEST(Encode, RegressionTargetsPassThrough) {
  const Dataset d = testing::synthetic_regression(10, 4);
  const EncodedDataset e = encode(d);
  EXPECT_EQ(e.data.targets, d.target().numeric);
  EXPECT_TRUE(e.encoder.classes().empty());
}

TEST(Export, WritesImputedCsvAndSidecar) {
  TempDir dir;
  const Dataset d = testing::synthetic_binary(50, 9);
  const DataSplit s = split(d, 0.8, 1);
  const ImputationRecipe recipe = fit_recipe(s.train);
  ExportMetadata meta;
  meta.dataset = "synthetic_binary";
  meta.scenario = "random";
  meta.degree = 0.5;
  meta.trial = 2;
  meta.removed = {0, 2};
  meta.removed_names = {"x0", "color"};
  meta.seed = 11;
  meta.imputation = "mean_mode";
  meta.schema = d.schema();
  const std::vector<std::size_t> removed = {0, 2};
  export_shifted(s.test, removed, recipe, dir / "out.csv", 11, &meta);

  const Dataset back = load_csv(dir / "out.csv", "back", &meta.schema);
  EXPECT_TRUE(back.same_content(apply_imputation(s.test, removed, recipe, 11)));
  const ExportMetadata read = read_export_metadata(sidecar_path(dir / "out.csv"));
  EXPECT_EQ(read.removed, meta.removed);
  EXPECT_EQ(read.removed_names, meta.removed_names);
  EXPECT_EQ(read.schema, meta.schema);
  EXPECT_EQ(read.degree, 0.5);
  EXPECT_EQ(read.trial, 2u);
  EXPECT_EQ(read.seed, 11u);
}

TEST(Export, BadSidecar) {
  TempDir dir;
  write_file(dir / "bad.json", "{not json");
  EXPECT_ERROR_CODE(read_export_metadata(dir / "bad.json"), "export.bad_metadata");
}

}  // namespace
}  // namespace fsbench
