#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsbench/dataset.h"
#include "fsbench/models.h"

// File-based protocol that lets any external program act as a model:
//
//   <command> <train_file> <test_file> <predictions_file> <task>
//
// train_file is a CSV with the target as last column, test_file the same
// features without the target. On exit status 0 the program must have
// written predictions_file with one row per test row, in test order:
//   regression:      prediction
//   classification:  label,p_<class>... (one column per train class)
// FSBENCH_SEED carries the experiment seed in the child environment.

namespace fsbench {

inline constexpr double kSimplexTolerance = 1e-6;

struct BridgeJob {
  std::string command;
  std::filesystem::path workdir;
  std::filesystem::path train_file;
  std::filesystem::path test_file;
  std::filesystem::path predictions_file;
  TaskKind task = TaskKind::kBinary;
  std::chrono::seconds timeout{600};
  std::uint64_t seed = 0;
};

// Writes the exchange files, runs the command and parses its predictions.
// Errors: bridge.nonzero_exit, bridge.timeout, bridge.spawn_failed,
// bridge.malformed, bridge.row_count, bridge.off_simplex.
std::vector<Prediction> bridge_evaluate(const BridgeJob& job, const Dataset& train,
                                        const Dataset& test);

struct ProcessResult {
  int exit_code = 0;
  bool timed_out = false;
  // Last few KB of the child's combined stdout/stderr.
  std::string output_tail;
};

// Runs `shell_command` under /bin/sh in its own process group; the group is
// killed if it outlives `timeout`. `log_file` receives stdout and stderr.
ProcessResult run_shell(const std::string& shell_command, std::chrono::milliseconds timeout,
                        const std::filesystem::path& log_file,
                        const std::vector<std::pair<std::string, std::string>>& extra_env = {});

std::string shell_quote(std::string_view text);

std::vector<Prediction> parse_predictions(const CsvTable& table, TaskKind task,
                                          std::span<const std::string> classes,
                                          std::size_t expected_rows);

void write_predictions_csv(std::span<const Prediction> predictions, TaskKind task,
                           std::span<const std::string> classes,
                           const std::filesystem::path& path);

// Reads a features-only bridge test file as a Dataset with the train schema;
// the target column holds a placeholder copied from the first train row.
Dataset read_bridge_test_file(const std::filesystem::path& path, const Dataset& train);

std::shared_ptr<const TrainedModel> make_external_model(const ModelSpec& spec,
                                                        const Dataset& train,
                                                        const BridgeOptions& options);

}  // namespace fsbench
