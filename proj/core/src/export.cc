#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsbench/dataset.h"
#include "fsbench/error.h"
#include "fsbench/imputation.h"

namespace fsbench {

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path out = csv_path;
  out.replace_extension(".json");
  return out;
}

void export_shifted(const Dataset& test, std::span<const std::size_t> removed,
                    const ImputationRecipe& recipe, const std::filesystem::path& path,
                    std::uint64_t seed, const ExportMetadata* metadata) {
  if (recipe.fills.size() < test.num_features()) {
    throw Error("export.incomplete_recipe", "imputation recipe does not cover every feature");
  }
  for (std::size_t j : removed) {
    if (j >= recipe.fills.size()) {
      throw Error("export.incomplete_recipe",
                  "imputation recipe has no fill for feature " + std::to_string(j));
    }
  }
  const Dataset shifted = apply_imputation(test, removed, recipe, seed);
  write_csv(shifted, path);
  if (metadata) write_export_metadata(*metadata, sidecar_path(path));
}

void write_export_metadata(const ExportMetadata& metadata,
                           const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["dataset"] = metadata.dataset;
  j["scenario"] = metadata.scenario;
  j["degree"] = metadata.degree;
  j["trial"] = metadata.trial;
  j["removed"] = metadata.removed;
  j["removed_names"] = metadata.removed_names;
  j["seed"] = metadata.seed;
  j["imputation"] = metadata.imputation;
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < metadata.schema.names.size(); ++c) {
    columns.push_back({{"name", metadata.schema.names[c]},
                       {"kind", std::string(to_string(metadata.schema.kinds[c]))}});
  }
  j["columns"] = std::move(columns);
  j["task"] = std::string(to_string(metadata.schema.task));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io.unwritable", "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

ExportMetadata read_export_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io.unreadable", "cannot open '" + path.string() + "'");
  ExportMetadata m;
  try {
    const auto j = nlohmann::json::parse(in);
    m.dataset = j.at("dataset").get<std::string>();
    m.scenario = j.at("scenario").get<std::string>();
    m.degree = j.at("degree").get<double>();
    m.trial = j.at("trial").get<std::size_t>();
    m.removed = j.at("removed").get<std::vector<std::size_t>>();
    m.removed_names = j.at("removed_names").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.imputation = j.at("imputation").get<std::string>();
    for (const auto& column : j.at("columns")) {
      m.schema.names.push_back(column.at("name").get<std::string>());
      m.schema.kinds.push_back(parse_column_kind(column.at("kind").get<std::string>()));
    }
    m.schema.task = parse_task_kind(j.at("task").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error("export.bad_metadata", "malformed sidecar '" + path.string() + "': " + e.what());
  }
  return m;
}

}  // namespace fsbench
