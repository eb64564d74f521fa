#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/csv.h"

namespace fsbench {

enum class ColumnKind { kNumeric, kCategorical };
enum class TaskKind { kBinary, kMulticlass, kRegression };

std::string_view to_string(ColumnKind kind);
std::string_view to_string(TaskKind task);
ColumnKind parse_column_kind(std::string_view text);
TaskKind parse_task_kind(std::string_view text);

inline bool is_classification(TaskKind task) {
  return task != TaskKind::kRegression;
}

// One typed column. Exactly one of `numeric` / `labels` is populated,
// according to `kind`.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<double> numeric;
  std::vector<std::string> labels;

  std::size_t size() const {
    return kind == ColumnKind::kNumeric ? numeric.size() : labels.size();
  }
  // Canonical text of one cell, as written to CSV.
  std::string cell(std::size_t row) const;

  friend bool operator==(const Column&, const Column&) = default;
};

struct Schema {
  std::vector<std::string> names;
  std::vector<ColumnKind> kinds;
  TaskKind task = TaskKind::kBinary;

  std::size_t num_features() const { return names.empty() ? 0 : names.size() - 1; }
  friend bool operator==(const Schema&, const Schema&) = default;
};

// Rectangular, immutable table whose last column is the target.
class Dataset {
 public:
  // Validates rectangularity, >= 1 feature, >= 1 row, and that `task` agrees
  // with the target column kind.
  Dataset(std::string name, std::vector<Column> columns, TaskKind task);

  const std::string& name() const { return name_; }
  TaskKind task() const { return task_; }
  std::size_t num_rows() const { return columns_.front().size(); }
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t num_features() const { return columns_.size() - 1; }
  std::size_t target_index() const { return columns_.size() - 1; }

  const Column& column(std::size_t index) const { return columns_.at(index); }
  const Column& target() const { return columns_.back(); }
  std::span<const Column> columns() const { return columns_; }
  Schema schema() const;

  Dataset select_rows(std::span<const std::size_t> rows) const;
  Dataset with_column(std::size_t index, Column replacement) const;
  Dataset renamed(std::string name) const;

  // Equality ignores the name.
  bool same_content(const Dataset& other) const {
    return task_ == other.task_ && columns_ == other.columns_;
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  TaskKind task_;
};

// A column is numeric iff every value parses as a finite real.
std::vector<ColumnKind> infer_schema(
    const std::vector<std::vector<std::string>>& raw_columns);

// Binary iff categorical with exactly 2 labels, multiclass with >= 3,
// regression iff numeric.
TaskKind derive_task(const Column& target);

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

// Loads a header-first CSV whose last column is the target. Rows containing a
// missing cell are dropped. When `schema` is given, column names must match
// and the stored kinds and task are used instead of being inferred.
Dataset load_csv(const std::filesystem::path& path, std::string name,
                 const Schema* schema = nullptr, LoadReport* report = nullptr);
Dataset dataset_from_table(const CsvTable& table, std::string name,
                           const Schema* schema = nullptr,
                           LoadReport* report = nullptr);

void write_csv(const Dataset& dataset, std::ostream& out,
               bool include_target = true);
void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               bool include_target = true);

struct DataSplit {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  double train_fraction = 0.8;
  bool stratified = false;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultTrainFraction = 0.8;

// floor(fraction * n) train rows (clamped so both sides are nonempty),
// stratified by target label for classification. Row order inside each side
// follows the source order.
DataSplit split(const Dataset& dataset, double train_fraction,
                std::uint64_t seed);

// ----------------------------------------------------------------------------
// Encoding

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Sorted distinct labels; a label's code is its index, and any label not in
// the list maps to the reserved code labels.size().
struct CategoryMap {
  std::vector<std::string> labels;

  static CategoryMap from_values(std::span<const std::string> values);
  std::size_t code(std::string_view label) const;
  std::size_t unknown_code() const { return labels.size(); }
  bool contains(std::string_view label) const;
};

struct EncodedData {
  Matrix features;
  // Regression targets, or class codes stored as doubles.
  std::vector<double> targets;
  // Class codes (classification only).
  std::vector<int> labels;
  std::size_t unknown_feature_cells = 0;
  std::size_t unknown_targets = 0;
};

// Mapping fitted on one dataset (normally the train split) and reapplied to
// any dataset with the same schema.
class Encoder {
 public:
  static Encoder fit(const Dataset& train);

  EncodedData transform(const Dataset& dataset) const;
  // Encodes a features-only table (no target column) whose header equals the
  // fitted feature names.
  Matrix transform_features(const CsvTable& features,
                            std::size_t* unknown_cells = nullptr) const;

  const Schema& schema() const { return schema_; }
  std::size_t num_features() const { return schema_.num_features(); }
  // Target class labels in code order (empty for regression).
  const std::vector<std::string>& classes() const { return target_map_.labels; }
  std::size_t num_classes() const { return target_map_.labels.size(); }
  // nullopt for numeric features.
  const std::optional<CategoryMap>& feature_map(std::size_t feature) const {
    return feature_maps_.at(feature);
  }

 private:
  Schema schema_;
  std::vector<std::optional<CategoryMap>> feature_maps_;
  CategoryMap target_map_;
};

struct EncodedDataset {
  Encoder encoder;
  EncodedData data;
};

EncodedDataset encode(const Dataset& dataset);

// ----------------------------------------------------------------------------
// Export

struct ImputationRecipe;

struct ExportMetadata {
  std::string dataset;
  std::string scenario;
  double degree = 0.0;
  std::size_t trial = 0;
  std::vector<std::size_t> removed;
  std::vector<std::string> removed_names;
  std::uint64_t seed = 0;
  std::string imputation;
  Schema schema;
};

// Writes `test` with the removed feature columns replaced by the recipe's
// fills, same header and row order. When `metadata` is given a JSON sidecar
// is written next to the CSV (same stem, ".json").
void export_shifted(const Dataset& test, std::span<const std::size_t> removed,
                    const ImputationRecipe& recipe,
                    const std::filesystem::path& path, std::uint64_t seed = 0,
                    const ExportMetadata* metadata = nullptr);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);
void write_export_metadata(const ExportMetadata& metadata,
                           const std::filesystem::path& path);
ExportMetadata read_export_metadata(const std::filesystem::path& path);

}  // namespace fsbench
