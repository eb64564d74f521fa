#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "fsbench/dataset.h"
#include "fsbench/error.h"
#include "fsbench/rng.h"

// Expects `statement` to throw fsbench::Error with the given code.
#define EXPECT_ERROR_CODE(statement, expected_code)                      \
  do {                                                                   \
    try {                                                                \
      statement;                                                         \
      ADD_FAILURE() << "expected " << (expected_code) << ", no throw";   \
    } catch (const ::fsbench::Error& e) {                                \
      EXPECT_EQ(e.code(), (expected_code)) << e.what();                  \
    }                                                                    \
  } while (false)

namespace fsbench::testing {

inline std::filesystem::path data_dir() { return FSBENCH_TEST_DATA_DIR; }

inline Dataset load_iris() { return load_csv(data_dir() / "iris.csv", "iris"); }

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "fsbench-test-XXXXXX").string();
    path_ = ::mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Column numeric_column(std::string name, std::vector<double> values) {
  return Column{std::move(name), ColumnKind::kNumeric, std::move(values), {}};
}

inline Column label_column(std::string name, std::vector<std::string> values) {
  return Column{std::move(name), ColumnKind::kCategorical, {}, std::move(values)};
}

// y = 3 x0 - 2 x1 + 0.5 x2 + noise, plus one irrelevant feature.
inline Dataset synthetic_regression(std::size_t n, std::uint64_t seed, double noise = 0.1) {
  Rng rng(seed);
  std::vector<std::vector<double>> x(4, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& col : x) col[i] = rng.uniform_unit() * 4.0 - 2.0;
    y[i] = 3.0 * x[0][i] - 2.0 * x[1][i] + 0.5 * x[2][i] + noise * (rng.uniform_unit() - 0.5);
  }
  std::vector<Column> columns;
  for (std::size_t j = 0; j < 4; ++j) columns.push_back(numeric_column("x" + std::to_string(j), x[j]));
  columns.push_back(numeric_column("y", y));
  return Dataset("synthetic_regression", std::move(columns), TaskKind::kRegression);
}

// Two numeric features, one categorical; the label depends on x0 + x1 and the
// category.
inline Dataset synthetic_binary(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x0(n), x1(n);
  std::vector<std::string> color(n), label(n);
  const char* colors[] = {"blue", "green", "red"};
  for (std::size_t i = 0; i < n; ++i) {
    x0[i] = rng.uniform_unit() * 2.0 - 1.0;
    x1[i] = rng.uniform_unit() * 2.0 - 1.0;
    color[i] = colors[rng.uniform_index(3)];
    const double score = x0[i] + 0.5 * x1[i] + (color[i] == "red" ? 0.4 : 0.0);
    label[i] = score > 0.1 ? "yes" : "no";
  }
  return Dataset("synthetic_binary",
                 {numeric_column("x0", x0), numeric_column("x1", x1),
                  label_column("color", color), label_column("label", label)},
                 TaskKind::kBinary);
}

// N numeric features of pure noise with a 3-class target.
inline Dataset synthetic_wide(std::size_t n_rows, std::size_t n_features, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Column> columns;
  for (std::size_t j = 0; j < n_features; ++j) {
    std::vector<double> v(n_rows);
    for (double& x : v) x = rng.uniform_unit();
    columns.push_back(numeric_column("f" + std::to_string(j), std::move(v)));
  }
  std::vector<std::string> y(n_rows);
  for (auto& label : y) label = std::string(1, static_cast<char>('a' + rng.uniform_index(3)));
  columns.push_back(label_column("target", std::move(y)));
  return Dataset("synthetic_wide", std::move(columns), TaskKind::kMulticlass);
}

}  // namespace fsbench::testing
