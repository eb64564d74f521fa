#include <gtest/gtest.h>

#include <fstream>

#include "fsbench/bridge.h"
#include "fsbench/evaluation.h"
#include "support.h"

namespace fsbench {
namespace {

using testing::TempDir;

std::string adapter(const std::string& model) {
  return shell_quote(FSBENCH_ADAPTER_PATH) + " " + model;
}

std::string fault(const std::string& mode) {
  return shell_quote(FSBENCH_FAULT_ADAPTER_PATH) + " " + mode;
}

BridgeJob job_in(const TempDir& dir, const std::string& command, TaskKind task) {
  BridgeJob job;
  job.command = command;
  job.workdir = dir.path();
  job.train_file = dir / "train.csv";
  job.test_file = dir / "test.csv";
  job.predictions_file = dir / "predictions.csv";
  job.task = task;
  job.timeout = std::chrono::seconds(20);
  job.seed = 17;
  return job;
}

Dataset binarized_iris() {
  const Dataset iris = testing::load_iris();
  Column target = iris.target();
  for (std::string& label : target.labels) label = label == "setosa" ? "setosa" : "other";
  std::vector<Column> columns(iris.columns().begin(), iris.columns().end());
  columns.back() = target;
  return Dataset("iris_binary", std::move(columns), TaskKind::kBinary);
}

void expect_same_predictions(const std::vector<Prediction>& a, const std::vector<Prediction>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].value, b[i].value);
    ASSERT_EQ(a[i].probabilities.size(), b[i].probabilities.size());
    for (std::size_t c = 0; c < a[i].probabilities.size(); ++c) {
      EXPECT_EQ(a[i].probabilities[c], b[i].probabilities[c]);
    }
  }
}

class BridgeEquivalence : public ::testing::TestWithParam<int> {};

TEST_P(BridgeEquivalence, AdapterMatchesInProcessModel) {
  const Dataset data = GetParam() == 0   ? testing::load_iris()
                       : GetParam() == 1 ? binarized_iris()
                                         : testing::synthetic_regression(120, 5);
  const DataSplit s = split(data, 0.8, 4);
  for (const char* model : {"cart", "knn", "boosted_stumps"}) {
    TempDir dir;
    const auto bridged =
        bridge_evaluate(job_in(dir, adapter(model), data.task()), s.train, s.test);
    const auto local = fit_model(parse_model_spec(model), s.train)->predict(s.test);
    expect_same_predictions(bridged, local);
  }
}

INSTANTIATE_TEST_SUITE_P(Tasks, BridgeEquivalence, ::testing::Values(0, 1, 2));

TEST(Bridge, ExternalModelThroughFitModel) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  const auto ext = fit_model(parse_model_spec("ext:" + adapter("logistic")), s.train);
  EXPECT_FALSE(ext->concurrent_predict());
  const auto local = fit_model(parse_model_spec("logistic"), s.train);
  expect_same_predictions(ext->predict(s.test), local->predict(s.test));
}

struct FaultCase {
  const char* mode;
  const char* code;
};

class BridgeFaults : public ::testing::TestWithParam<FaultCase> {};

TEST_P(BridgeFaults, MapsToErrorCode) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  TempDir dir;
  EXPECT_ERROR_CODE(
      bridge_evaluate(job_in(dir, fault(GetParam().mode), TaskKind::kMulticlass), s.train, s.test),
      GetParam().code);
}

INSTANTIATE_TEST_SUITE_P(
    Modes, BridgeFaults,
    ::testing::Values(FaultCase{"wrong_rows", "bridge.row_count"},
                      FaultCase{"off_simplex", "bridge.off_simplex"},
                      FaultCase{"negative", "bridge.off_simplex"},
                      FaultCase{"exit", "bridge.nonzero_exit"},
                      FaultCase{"no_output", "bridge.malformed"},
                      FaultCase{"bad_header", "bridge.malformed"}));

TEST(Bridge, RegressionFaults) {
  const Dataset d = testing::synthetic_regression(50, 1);
  const DataSplit s = split(d, 0.8, 0);
  TempDir dir;
  EXPECT_ERROR_CODE(
      bridge_evaluate(job_in(dir, fault("bad_header"), TaskKind::kRegression), s.train, s.test),
      "bridge.malformed");
  EXPECT_ERROR_CODE(
      bridge_evaluate(job_in(dir, fault("wrong_rows"), TaskKind::kRegression), s.train, s.test),
      "bridge.row_count");
  const auto ok =
      bridge_evaluate(job_in(dir, fault("ok"), TaskKind::kRegression), s.train, s.test);
  EXPECT_EQ(ok.size(), s.test.num_rows());
}

TEST(Bridge, TimeoutKillsTheChild) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  TempDir dir;
  BridgeJob job = job_in(dir, fault("sleep"), TaskKind::kMulticlass);
  job.timeout = std::chrono::seconds(1);
  const auto start = std::chrono::steady_clock::now();
  EXPECT_ERROR_CODE(bridge_evaluate(job, s.train, s.test), "bridge.timeout");
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(Bridge, SeedIsExported) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  TempDir dir;
  bridge_evaluate(job_in(dir, fault("echo_seed"), TaskKind::kMulticlass), s.train, s.test);
  std::ifstream in(dir / "predictions.csv.seed");
  std::string seed;
  in >> seed;
  EXPECT_EQ(seed, "17");
}

TEST(Bridge, ExchangeFilesFollowTheProtocol) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  TempDir dir;
  bridge_evaluate(job_in(dir, fault("ok"), TaskKind::kMulticlass), s.train, s.test);
  const CsvTable train = read_csv(dir / "train.csv");
  const CsvTable test = read_csv(dir / "test.csv");
  EXPECT_EQ(train.header.size(), 5u);
  EXPECT_EQ(test.header.size(), 4u);
  EXPECT_EQ(test.rows.size(), s.test.num_rows());
  const CsvTable pred = read_csv(dir / "predictions.csv");
  EXPECT_EQ(pred.header,
            (CsvRow{"label", "p_setosa", "p_versicolor", "p_virginica"}));
}

TEST(Bridge, SpawnFailureAndEmptyCommand) {
  const Dataset iris = testing::load_iris();
  const DataSplit s = split(iris, 0.8, 0);
  TempDir dir;
  EXPECT_ERROR_CODE(bridge_evaluate(job_in(dir, "", TaskKind::kMulticlass), s.train, s.test),
                    "bridge.spawn_failed");
  EXPECT_ERROR_CODE(
      bridge_evaluate(job_in(dir, "/nonexistent/model", TaskKind::kMulticlass), s.train, s.test),
      "bridge.nonzero_exit");
}

TEST(ParsePredictions, ValidatesShape) {
  const std::vector<std::string> classes = {"a", "b"};
  CsvTable t;
  t.header = {"label", "p_a", "p_b"};
  t.rows = {{"a", "0.7", "0.3"}, {"b", "0.2", "0.8"}};
  const auto p = parse_predictions(t, TaskKind::kBinary, classes, 2);
  EXPECT_EQ(p[1].label, 1);
  EXPECT_EQ(p[0].probabilities, (std::vector<double>{0.7, 0.3}));
  EXPECT_ERROR_CODE(parse_predictions(t, TaskKind::kBinary, classes, 3), "bridge.row_count");
  t.rows[0][0] = "c";
  EXPECT_ERROR_CODE(parse_predictions(t, TaskKind::kBinary, classes, 2), "bridge.malformed");
  t.rows[0] = {"a", "0.7000004", "0.3"};
  EXPECT_NO_THROW(parse_predictions(t, TaskKind::kBinary, classes, 2));
  t.rows[0] = {"a", "0.70001", "0.3"};
  EXPECT_ERROR_CODE(parse_predictions(t, TaskKind::kBinary, classes, 2), "bridge.off_simplex");
  t.rows[0] = {"a", "x", "0.3"};
  EXPECT_ERROR_CODE(parse_predictions(t, TaskKind::kBinary, classes, 2), "bridge.malformed");
}

TEST(ShellQuote, SurvivesTheShell) {
  TempDir dir;
  const std::string tricky = "it's a \"test\" $HOME `x`";
  const ProcessResult r = run_shell("printf %s " + shell_quote(tricky),
                                    std::chrono::milliseconds(5000), dir / "log.txt");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output_tail, tricky);
}

TEST(ReadBridgeTestFile, UsesTrainSchema) {
  TempDir dir;
  const Dataset d = testing::synthetic_binary(30, 3);
  write_csv(d, dir / "t.csv", false);
  const Dataset back = read_bridge_test_file(dir / "t.csv", d);
  EXPECT_EQ(back.schema(), d.schema());
  EXPECT_EQ(back.column(2), d.column(2));
}

}  // namespace
}  // namespace fsbench
