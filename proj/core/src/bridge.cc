#include "fsbench/bridge.h"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fsbench/error.h"

extern char** environ;

namespace fsbench {
namespace {

constexpr std::size_t kTailBytes = 4096;

std::string read_tail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.size() > kTailBytes) text.erase(0, text.size() - kTailBytes);
  return text;
}

std::filesystem::path make_temp_dir() {
  std::string pattern =
      (std::filesystem::temp_directory_path() / "fsbench-bridge-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) {
    throw Error("io.unwritable", "cannot create a temporary bridge directory");
  }
  return pattern;
}

class ExternalModel final : public TrainedModel {
 public:
  ExternalModel(ModelSpec spec, const Dataset& train, const BridgeOptions& options)
      : TrainedModel(spec, Encoder::fit(train).classes(), train.task()),
        train_(train),
        timeout_(options.timeout) {
    if (options.workdir.empty()) {
      workdir_ = make_temp_dir();
      owns_workdir_ = true;
    } else {
      workdir_ = options.workdir;
      std::filesystem::create_directories(workdir_);
    }
  }

  ~ExternalModel() override {
    if (owns_workdir_) {
      std::error_code ignored;
      std::filesystem::remove_all(workdir_, ignored);
    }
  }

  std::vector<Prediction> predict(const Dataset& rows) const override {
    std::lock_guard lock(mutex_);
    BridgeJob job;
    job.command = spec().command;
    job.workdir = workdir_;
    job.train_file = workdir_ / "train.csv";
    job.test_file = workdir_ / "test.csv";
    job.predictions_file = workdir_ / "predictions.csv";
    job.task = task();
    job.timeout = timeout_;
    job.seed = spec().seed;
    return bridge_evaluate(job, train_, rows);
  }

  const std::vector<std::string>& warnings() const override { return warnings_; }
  bool concurrent_predict() const override { return false; }

 private:
  Dataset train_;
  std::chrono::seconds timeout_;
  std::filesystem::path workdir_;
  bool owns_workdir_ = false;
  std::vector<std::string> warnings_;
  mutable std::mutex mutex_;
};

}  // namespace

std::string shell_quote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

ProcessResult run_shell(const std::string& shell_command, std::chrono::milliseconds timeout,
                        const std::filesystem::path& log_file,
                        const std::vector<std::pair<std::string, std::string>>& extra_env) {
  std::vector<std::string> env_storage;
  for (char** e = environ; e && *e; ++e) {
    const std::string_view entry(*e);
    const bool overridden = std::any_of(extra_env.begin(), extra_env.end(), [&](const auto& kv) {
      return entry.starts_with(kv.first + "=");
    });
    if (!overridden) env_storage.emplace_back(entry);
  }
  for (const auto& [key, value] : extra_env) env_storage.push_back(key + "=" + value);
  std::vector<char*> envp;
  for (std::string& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::string sh = "/bin/sh", flag = "-c", cmd = shell_command;
  char* argv[] = {sh.data(), flag.data(), cmd.data(), nullptr};

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  const std::string log = log_file.string();
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  pid_t pid = 0;
  const int rc = posix_spawn(&pid, sh.c_str(), &actions, &attr, argv, envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw Error("bridge.spawn_failed",
                "cannot start '" + shell_command + "': " + std::strerror(rc));
  }

  ProcessResult result;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  int status = 0;
  while (true) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) {
      throw Error("bridge.spawn_failed", "waitpid failed: " + std::string(std::strerror(errno)));
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!result.timed_out) {
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  } else {
    result.exit_code = -1;
  }
  result.output_tail = read_tail(log_file);
  return result;
}

std::vector<Prediction> parse_predictions(const CsvTable& table, TaskKind task,
                                          std::span<const std::string> classes,
                                          std::size_t expected_rows) {
  if (table.rows.size() != expected_rows) {
    throw Error("bridge.row_count", "predictions file has " + std::to_string(table.rows.size()) +
                                        " rows but the test file has " +
                                        std::to_string(expected_rows));
  }
  auto find_column = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (table.header[c] == name) return c;
    }
    throw Error("bridge.malformed", "predictions file lacks column '" + name + "'");
  };
  auto number_at = [&](std::size_t r, std::size_t c) {
    const CsvRow& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw Error("bridge.malformed", "predictions row " + std::to_string(r + 1) + " has " +
                                          std::to_string(row.size()) + " fields, header has " +
                                          std::to_string(table.header.size()));
    }
    const auto v = parse_number(row[c]);
    if (!v) {
      throw Error("bridge.malformed", "predictions row " + std::to_string(r + 1) +
                                          ": '" + row[c] + "' is not a finite number");
    }
    return *v;
  };

  std::vector<Prediction> out(expected_rows);
  if (task == TaskKind::kRegression) {
    const std::size_t col = find_column("prediction");
    for (std::size_t r = 0; r < expected_rows; ++r) out[r].value = number_at(r, col);
    return out;
  }

  const std::size_t label_col = find_column("label");
  std::vector<std::size_t> prob_cols;
  for (const std::string& c : classes) prob_cols.push_back(find_column("p_" + c));
  if (table.header.size() != classes.size() + 1) {
    throw Error("bridge.malformed", "predictions header must be label plus one p_<class> per "
                                    "train class");
  }
  const std::vector<std::string> sorted(classes.begin(), classes.end());
  for (std::size_t r = 0; r < expected_rows; ++r) {
    Prediction& p = out[r];
    double total = 0.0;
    for (std::size_t c : prob_cols) {
      const double v = number_at(r, c);
      if (v < -kSimplexTolerance) {
        throw Error("bridge.off_simplex",
                    "predictions row " + std::to_string(r + 1) + " has a negative probability");
      }
      p.probabilities.push_back(v);
      total += v;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw Error("bridge.off_simplex", "predictions row " + std::to_string(r + 1) +
                                            " probabilities sum to " + format_number(total));
    }
    const std::string& label = table.rows[r][label_col];
    const auto it = std::find(sorted.begin(), sorted.end(), label);
    if (it == sorted.end()) {
      throw Error("bridge.malformed", "predictions row " + std::to_string(r + 1) +
                                          " has unknown label '" + label + "'");
    }
    p.label = static_cast<int>(it - sorted.begin());
    p.value = static_cast<double>(p.label);
  }
  return out;
}

void write_predictions_csv(std::span<const Prediction> predictions, TaskKind task,
                           std::span<const std::string> classes,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io.unwritable", "cannot write '" + path.string() + "'");
  if (task == TaskKind::kRegression) {
    out << "prediction\n";
    for (const Prediction& p : predictions) out << format_number(p.value) << '\n';
    return;
  }
  std::vector<std::string> header = {"label"};
  for (const std::string& c : classes) header.push_back("p_" + c);
  write_csv_row(out, header);
  std::vector<std::string> row(header.size());
  for (const Prediction& p : predictions) {
    row[0] = classes[static_cast<std::size_t>(p.label)];
    for (std::size_t c = 0; c < classes.size(); ++c) row[c + 1] = format_number(p.probabilities[c]);
    write_csv_row(out, row);
  }
}

Dataset read_bridge_test_file(const std::filesystem::path& path, const Dataset& train) {
  CsvTable table = read_csv(path);
  const std::string placeholder = train.target().cell(0);
  table.header.push_back(train.target().name);
  for (CsvRow& row : table.rows) row.push_back(placeholder);
  const Schema schema = train.schema();
  return dataset_from_table(table, path.stem().string(), &schema);
}

std::vector<Prediction> bridge_evaluate(const BridgeJob& job, const Dataset& train,
                                        const Dataset& test) {
  if (job.command.empty()) throw Error("bridge.spawn_failed", "bridge command is empty");
  std::filesystem::create_directories(job.workdir);
  write_csv(train, job.train_file, true);
  write_csv(test, job.test_file, false);
  std::error_code ignored;
  std::filesystem::remove(job.predictions_file, ignored);

  const std::string command = job.command + " " + shell_quote(job.train_file.string()) + " " +
                              shell_quote(job.test_file.string()) + " " +
                              shell_quote(job.predictions_file.string()) + " " +
                              std::string(to_string(job.task));
  const ProcessResult result =
      run_shell(command, std::chrono::duration_cast<std::chrono::milliseconds>(job.timeout),
                job.workdir / "bridge.log", {{"FSBENCH_SEED", std::to_string(job.seed)}});
  if (result.timed_out) {
    throw Error("bridge.timeout", "'" + job.command + "' exceeded " +
                                      std::to_string(job.timeout.count()) + " s");
  }
  if (result.exit_code != 0) {
    throw Error("bridge.nonzero_exit", "'" + job.command + "' exited with status " +
                                           std::to_string(result.exit_code) + ": " +
                                           result.output_tail);
  }
  if (!std::filesystem::exists(job.predictions_file)) {
    throw Error("bridge.malformed", "'" + job.command + "' did not write " +
                                        job.predictions_file.string());
  }
  const std::vector<std::string> classes = Encoder::fit(train).classes();
  return parse_predictions(read_csv(job.predictions_file), job.task, classes, test.num_rows());
}

std::shared_ptr<const TrainedModel> make_external_model(const ModelSpec& spec,
                                                        const Dataset& train,
                                                        const BridgeOptions& options) {
  return std::make_shared<ExternalModel>(spec, train, options);
}

}  // namespace fsbench
