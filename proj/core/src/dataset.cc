#include "fsbench/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>

#include "fsbench/error.h"
#include "fsbench/rng.h"

namespace fsbench {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::kBinary:
      return "binary";
    case TaskKind::kMulticlass:
      return "multiclass";
    case TaskKind::kRegression:
      return "regression";
  }
  return "unknown";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "numeric") return ColumnKind::kNumeric;
  if (text == "categorical") return ColumnKind::kCategorical;
  throw Error("dataset.bad_kind", "unknown column kind '" + std::string(text) + "'");
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "binary") return TaskKind::kBinary;
  if (text == "multiclass") return TaskKind::kMulticlass;
  if (text == "regression") return TaskKind::kRegression;
  throw Error("dataset.bad_task", "unknown task kind '" + std::string(text) + "'");
}

std::string Column::cell(std::size_t row) const {
  return kind == ColumnKind::kNumeric ? format_number(numeric.at(row))
                                      : labels.at(row);
}

// ----------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::string name, std::vector<Column> columns, TaskKind task)
    : name_(std::move(name)), columns_(std::move(columns)), task_(task) {
  if (columns_.size() < 2) {
    throw Error("dataset.too_few_columns",
                "dataset '" + name_ + "' needs at least one feature and a target");
  }
  const std::size_t rows = columns_.front().size();
  if (rows == 0) {
    throw Error("dataset.no_rows", "dataset '" + name_ + "' has no rows");
  }
  for (const Column& column : columns_) {
    if (column.size() != rows) {
      throw Error("dataset.ragged_rows",
                  "column '" + column.name + "' has " +
                      std::to_string(column.size()) + " values, expected " +
                      std::to_string(rows));
    }
    if ((column.kind == ColumnKind::kNumeric && !column.labels.empty()) ||
        (column.kind == ColumnKind::kCategorical && !column.numeric.empty())) {
      throw Error("dataset.bad_column",
                  "column '" + column.name + "' stores values of the wrong kind");
    }
  }
  const bool numeric_target = target().kind == ColumnKind::kNumeric;
  if (numeric_target != (task_ == TaskKind::kRegression)) {
    throw Error("dataset.task_mismatch",
                "task '" + std::string(to_string(task_)) +
                    "' does not match target column kind '" +
                    std::string(to_string(target().kind)) + "'");
  }
}

Schema Dataset::schema() const {
  Schema schema;
  schema.task = task_;
  for (const Column& column : columns_) {
    schema.names.push_back(column.name);
    schema.kinds.push_back(column.kind);
  }
  return schema;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Column> out;
  out.reserve(columns_.size());
  for (const Column& column : columns_) {
    Column picked{column.name, column.kind, {}, {}};
    if (column.kind == ColumnKind::kNumeric) {
      picked.numeric.reserve(rows.size());
      for (std::size_t r : rows) picked.numeric.push_back(column.numeric.at(r));
    } else {
      picked.labels.reserve(rows.size());
      for (std::size_t r : rows) picked.labels.push_back(column.labels.at(r));
    }
    out.push_back(std::move(picked));
  }
  return Dataset(name_, std::move(out), task_);
}

Dataset Dataset::with_column(std::size_t index, Column replacement) const {
  std::vector<Column> out = columns_;
  out.at(index) = std::move(replacement);
  return Dataset(name_, std::move(out), task_);
}

Dataset Dataset::renamed(std::string name) const {
  return Dataset(std::move(name), columns_, task_);
}

// ----------------------------------------------------------------------------
// Ingestion

std::vector<ColumnKind> infer_schema(
    const std::vector<std::vector<std::string>>& raw_columns) {
  std::vector<ColumnKind> kinds;
  kinds.reserve(raw_columns.size());
  for (const auto& values : raw_columns) {
    const bool numeric =
        std::all_of(values.begin(), values.end(),
                    [](const std::string& v) { return parse_number(v).has_value(); });
    kinds.push_back(numeric ? ColumnKind::kNumeric : ColumnKind::kCategorical);
  }
  return kinds;
}

TaskKind derive_task(const Column& target) {
  if (target.kind == ColumnKind::kNumeric) return TaskKind::kRegression;
  const auto distinct = CategoryMap::from_values(target.labels).labels.size();
  return distinct <= 2 ? TaskKind::kBinary : TaskKind::kMulticlass;
}

Dataset dataset_from_table(const CsvTable& table, std::string name,
                           const Schema* schema, LoadReport* report) {
  const std::size_t width = table.header.size();
  if (width < 2) {
    throw Error("dataset.too_few_columns",
                "'" + name + "' must have at least 2 columns (features + target)");
  }
  if (schema && schema->names != table.header) {
    throw Error("dataset.schema_mismatch",
                "header of '" + name + "' does not match the expected schema");
  }

  std::vector<std::vector<std::string>> raw(width);
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const CsvRow& row = table.rows[r];
    if (row.size() != width) {
      throw Error("dataset.ragged_rows",
                  "row on line " + std::to_string(table.line_numbers.at(r)) +
                      " of '" + name + "' has " + std::to_string(row.size()) +
                      " fields, header has " + std::to_string(width));
    }
    if (std::any_of(row.begin(), row.end(),
                    [](const std::string& v) { return is_missing_token(v); })) {
      ++dropped;
      continue;
    }
    for (std::size_t c = 0; c < width; ++c) raw[c].push_back(row[c]);
  }
  if (report) {
    report->rows_read = table.rows.size();
    report->rows_dropped = dropped;
  }
  if (raw.front().empty()) {
    throw Error("dataset.no_rows", "'" + name + "' has no usable rows");
  }

  const std::vector<ColumnKind> kinds = schema ? schema->kinds : infer_schema(raw);
  std::vector<Column> columns;
  columns.reserve(width);
  for (std::size_t c = 0; c < width; ++c) {
    Column column{table.header[c], kinds[c], {}, {}};
    if (kinds[c] == ColumnKind::kNumeric) {
      column.numeric.reserve(raw[c].size());
      for (const std::string& v : raw[c]) {
        const auto parsed = parse_number(v);
        if (!parsed) {
          throw Error("dataset.schema_mismatch",
                      "value '" + v + "' in numeric column '" + column.name +
                          "' is not a finite number");
        }
        column.numeric.push_back(*parsed);
      }
    } else {
      column.labels = std::move(raw[c]);
    }
    columns.push_back(std::move(column));
  }
  const TaskKind task = schema ? schema->task : derive_task(columns.back());
  return Dataset(std::move(name), std::move(columns), task);
}

Dataset load_csv(const std::filesystem::path& path, std::string name,
                 const Schema* schema, LoadReport* report) {
  return dataset_from_table(read_csv(path), std::move(name), schema, report);
}

void write_csv(const Dataset& dataset, std::ostream& out, bool include_target) {
  const std::size_t width =
      include_target ? dataset.num_columns() : dataset.num_features();
  std::vector<std::string> fields(width);
  for (std::size_t c = 0; c < width; ++c) fields[c] = dataset.column(c).name;
  write_csv_row(out, fields);
  for (std::size_t r = 0; r < dataset.num_rows(); ++r) {
    for (std::size_t c = 0; c < width; ++c) fields[c] = dataset.column(c).cell(r);
    write_csv_row(out, fields);
  }
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path,
               bool include_target) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io.unwritable", "cannot write '" + path.string() + "'");
  write_csv(dataset, out, include_target);
  out.flush();
  if (!out) throw Error("io.unwritable", "failed writing '" + path.string() + "'");
}

// ----------------------------------------------------------------------------
// Splitting

DataSplit split(const Dataset& dataset, double train_fraction,
                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("split.bad_fraction", "train_fraction must lie in (0, 1), got " +
                                          format_number(train_fraction));
  }
  const std::size_t n = dataset.num_rows();
  if (n < 2) throw Error("split.too_few_rows", "splitting needs at least 2 rows");

  auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  Rng rng(seed);
  std::vector<std::string> warnings;
  std::vector<std::size_t> train_rows;
  bool stratified = false;

  if (is_classification(dataset.task())) {
    std::map<std::string, std::vector<std::size_t>> by_class;
    const auto& labels = dataset.target().labels;
    for (std::size_t r = 0; r < n; ++r) by_class[labels[r]].push_back(r);
    const bool too_small = std::any_of(by_class.begin(), by_class.end(),
                                       [](const auto& kv) { return kv.second.size() < 2; });
    if (too_small) {
      warnings.push_back("a class has fewer than 2 rows; split is unstratified");
    } else {
      stratified = true;
      // Largest-remainder apportionment of n_train over classes.
      std::vector<std::size_t> quota;
      std::vector<std::pair<double, std::size_t>> remainders;
      std::size_t assigned = 0;
      std::size_t idx = 0;
      for (const auto& [label, rows] : by_class) {
        const double exact = static_cast<double>(n_train) *
                             static_cast<double>(rows.size()) / static_cast<double>(n);
        const auto base = static_cast<std::size_t>(std::floor(exact + 1e-9));
        quota.push_back(base);
        assigned += base;
        remainders.emplace_back(exact - static_cast<double>(base), idx++);
      }
      std::stable_sort(remainders.begin(), remainders.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      for (std::size_t i = 0; assigned < n_train; ++i) {
        ++quota[remainders[i % remainders.size()].second];
        ++assigned;
      }
      idx = 0;
      for (auto& [label, rows] : by_class) {
        rng.shuffle(rows);
        train_rows.insert(train_rows.end(), rows.begin(),
                          rows.begin() + static_cast<std::ptrdiff_t>(quota[idx++]));
      }
    }
  }
  if (!stratified) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(all);
    train_rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  }

  std::sort(train_rows.begin(), train_rows.end());
  std::vector<std::size_t> test_rows;
  test_rows.reserve(n - train_rows.size());
  std::size_t next = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (next < train_rows.size() && train_rows[next] == r) {
      ++next;
    } else {
      test_rows.push_back(r);
    }
  }

  return DataSplit{
      dataset.select_rows(train_rows).renamed(dataset.name() + ":train"),
      dataset.select_rows(test_rows).renamed(dataset.name() + ":test"),
      seed,
      train_fraction,
      stratified,
      std::move(train_rows),
      std::move(test_rows),
      std::move(warnings),
  };
}

// ----------------------------------------------------------------------------
// Encoding

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(rows[i] * cols_), cols_,
                out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
  }
  return out;
}

CategoryMap CategoryMap::from_values(std::span<const std::string> values) {
  CategoryMap map;
  map.labels.assign(values.begin(), values.end());
  std::sort(map.labels.begin(), map.labels.end());
  map.labels.erase(std::unique(map.labels.begin(), map.labels.end()), map.labels.end());
  return map;
}

std::size_t CategoryMap::code(std::string_view label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return unknown_code();
  return static_cast<std::size_t>(it - labels.begin());
}

bool CategoryMap::contains(std::string_view label) const {
  return code(label) != unknown_code();
}

Encoder Encoder::fit(const Dataset& train) {
  Encoder encoder;
  encoder.schema_ = train.schema();
  for (std::size_t j = 0; j < train.num_features(); ++j) {
    const Column& column = train.column(j);
    if (column.kind == ColumnKind::kCategorical) {
      encoder.feature_maps_.emplace_back(CategoryMap::from_values(column.labels));
    } else {
      encoder.feature_maps_.emplace_back(std::nullopt);
    }
  }
  if (is_classification(train.task())) {
    encoder.target_map_ = CategoryMap::from_values(train.target().labels);
  }
  return encoder;
}

EncodedData Encoder::transform(const Dataset& dataset) const {
  const Schema schema = dataset.schema();
  if (schema.names != schema_.names || schema.kinds != schema_.kinds) {
    throw Error("encode.schema_mismatch",
                "dataset '" + dataset.name() + "' does not match the fitted schema");
  }
  EncodedData out;
  const std::size_t rows = dataset.num_rows();
  const std::size_t d = num_features();
  out.features = Matrix(rows, d);
  for (std::size_t j = 0; j < d; ++j) {
    const Column& column = dataset.column(j);
    if (column.kind == ColumnKind::kNumeric) {
      for (std::size_t r = 0; r < rows; ++r) out.features(r, j) = column.numeric[r];
    } else {
      const CategoryMap& map = *feature_maps_[j];
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t code = map.code(column.labels[r]);
        if (code == map.unknown_code()) ++out.unknown_feature_cells;
        out.features(r, j) = static_cast<double>(code);
      }
    }
  }
  const Column& target = dataset.target();
  out.targets.resize(rows);
  if (target.kind == ColumnKind::kNumeric) {
    out.targets = target.numeric;
  } else {
    out.labels.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t code = target_map_.code(target.labels[r]);
      if (code == target_map_.unknown_code()) ++out.unknown_targets;
      out.labels[r] = static_cast<int>(code);
      out.targets[r] = static_cast<double>(code);
    }
  }
  return out;
}

Matrix Encoder::transform_features(const CsvTable& features,
                                   std::size_t* unknown_cells) const {
  const std::size_t d = num_features();
  const std::vector<std::string> expected(schema_.names.begin(),
                                          schema_.names.begin() + static_cast<std::ptrdiff_t>(d));
  if (features.header != expected) {
    throw Error("encode.schema_mismatch", "feature header does not match the fitted schema");
  }
  Matrix out(features.rows.size(), d);
  std::size_t unknown = 0;
  for (std::size_t r = 0; r < features.rows.size(); ++r) {
    const CsvRow& row = features.rows[r];
    if (row.size() != d) {
      throw Error("dataset.ragged_rows", "feature row " + std::to_string(r + 1) +
                                             " has " + std::to_string(row.size()) +
                                             " fields, expected " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (feature_maps_[j]) {
        const std::size_t code = feature_maps_[j]->code(row[j]);
        if (code == feature_maps_[j]->unknown_code()) ++unknown;
        out(r, j) = static_cast<double>(code);
      } else {
        const auto value = parse_number(row[j]);
        if (!value) {
          throw Error("dataset.schema_mismatch", "value '" + row[j] + "' in numeric column '" +
                                                     schema_.names[j] + "' is not a number");
        }
        out(r, j) = *value;
      }
    }
  }
  if (unknown_cells) *unknown_cells = unknown;
  return out;
}

EncodedDataset encode(const Dataset& dataset) {
  Encoder encoder = Encoder::fit(dataset);
  EncodedData data = encoder.transform(dataset);
  return {std::move(encoder), std::move(data)};
}

}  // namespace fsbench
