#include "fsbench/cli.h"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsbench/csv.h"
#include "fsbench/error.h"

namespace fsbench {
namespace {

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ext: commands may themselves contain commas, so they are kept whole.
std::vector<std::string> split_models(const std::string& text) {
  if (text.starts_with("ext:")) return {text};
  std::vector<std::string> out;
  for (std::string& part : split_list(text)) {
    // "knn:k=3,cart" splits into "knn:k=3" and "cart"; a bare "k=v" part
    // continues the previous spec.
    if (!out.empty() && part.find('=') != std::string::npos &&
        part.find(':') == std::string::npos) {
      out.back() += "," + part;
    } else {
      out.push_back(std::move(part));
    }
  }
  return out;
}

}  // namespace

bool parse_bool_flag(const std::string& text) {
  const std::string v = lower(text);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("cli.usage", "expected True or False, got '" + text + "'");
}

ExperimentConfig parse_command_line(const std::vector<std::string>& args, bool* help_requested,
                                    std::string* help_text) {
  CLI::App app{"Feature-shift benchmark: evaluates models on test sets with features removed "
               "and imputed."};
  app.name("fsbench");

  std::string dataset, model = "cart", task = "random", degree = "grid";
  std::string export_flag = "False", upper_flag = "False";
  std::string metrics, imputation = "mean_mode", out = "fsbench_out", data_dir;
  std::uint64_t seed = 0;
  double train_fraction = kDefaultTrainFraction;
  std::size_t jobs = 0, cap = kDefaultCombinationCap;
  long timeout = 600;

  app.add_option("--dataset", dataset, "CSV path or registered name; comma-separated list")
      ->required();
  app.add_option("--model", model, "model spec (majority_or_mean, linear, logistic, knn, cart, "
                                    "boosted_stumps, name:k=v, ext:<command>); comma-separated");
  app.add_option("--task", task, "single | least | most | random");
  app.add_option("--degree", degree, "fraction of features removed in [0, 1], or grid");
  app.add_option("--export_dataset", export_flag, "True to write shifted test sets");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--metric", metrics, "accuracy, auc, rmse; comma-separated");
  app.add_option("--train_fraction", train_fraction, "train share of the split");
  app.add_option("--imputation", imputation, "mean_mode | random_empirical");
  app.add_option("--upper_bound", upper_flag, "True to also retrain per shifted subset");
  app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  app.add_option("--cap", cap, "maximum random subsets per degree");
  app.add_option("--data_dir", data_dir, "directory of registered datasets");
  app.add_option("--timeout", timeout, "external model timeout in seconds");

  if (help_text) *help_text = app.help();
  if (help_requested) *help_requested = false;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    if (help_requested) *help_requested = true;
    return {};
  } catch (const CLI::ParseError& e) {
    throw Error("cli.usage", e.what());
  }

  ExperimentConfig config;
  config.datasets = split_list(dataset);
  config.models = split_models(model);
  if (config.datasets.empty()) throw Error("cli.usage", "--dataset is empty");
  if (config.models.empty()) throw Error("cli.usage", "--model is empty");
  try {
    config.task = parse_scenario_kind(lower(task));
  } catch (const Error& e) {
    throw Error("cli.usage", e.what());
  }
  if (lower(degree) != "grid") {
    const auto d = parse_number(degree);
    if (!d || *d < 0.0 || *d > 1.0) {
      throw Error("cli.usage", "--degree must be a number in [0, 1] or 'grid', got '" + degree +
                                   "'");
    }
    config.degree = *d;
  }
  config.export_dataset = parse_bool_flag(export_flag);
  config.upper_bound = parse_bool_flag(upper_flag);
  config.seed = seed;
  config.output_dir = out;
  try {
    for (const std::string& m : split_list(metrics)) {
      config.metrics.push_back(parse_metric_kind(lower(m)));
    }
    config.imputation = parse_imputation_strategy(lower(imputation));
  } catch (const Error& e) {
    throw Error("cli.usage", e.what());
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("cli.usage", "--train_fraction must lie in (0, 1)");
  }
  config.train_fraction = train_fraction;
  config.jobs = jobs;
  if (cap == 0) throw Error("cli.usage", "--cap must be positive");
  config.combination_cap = cap;
  config.data_dir = data_dir;
  if (timeout <= 0) throw Error("cli.usage", "--timeout must be positive");
  config.bridge_timeout = std::chrono::seconds(timeout);
  return config;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto report = [&](const std::string& code, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = code;
    j["message"] = message;
    err << j.dump() << '\n';
  };
  try {
    bool help = false;
    std::string help_text;
    const ExperimentConfig config = parse_command_line(args, &help, &help_text);
    if (help) {
      out << help_text;
      return 0;
    }
    const ExperimentResult result = run_experiment(config);
    for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
    out << "records: " << result.records.size() << '\n'
        << "fits: " << result.fits << '\n'
        << "shifted predictions: " << result.shifted_predictions << '\n'
        << "exported files: " << result.exported_files.size() << '\n'
        << "reports: " << config.output_dir.string() << '\n';
    return 0;
  } catch (const Error& e) {
    report(e.code(), e.what());
    return e.code() == "cli.usage" ? 2 : 1;
  } catch (const std::exception& e) {
    report("internal", e.what());
    return 1;
  }
}

}  // namespace fsbench
