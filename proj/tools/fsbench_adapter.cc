// Runs an in-repo model behind the external-model protocol:
//   fsbench_adapter <model-spec> <train.csv> <test.csv> <predictions.csv> <task>
#include <cstdlib>
#include <iostream>
#include <string>

#include "fsbench/bridge.h"
#include "fsbench/error.h"
#include "fsbench/models.h"

int main(int argc, char** argv) {
  if (argc != 6) {
    std::cerr << "usage: fsbench_adapter <model-spec> <train> <test> <predictions> <task>\n";
    return 2;
  }
  try {
    fsbench::ModelSpec spec = fsbench::parse_model_spec(argv[1]);
    if (spec.kind == fsbench::ModelKind::kExternal) {
      std::cerr << "fsbench_adapter: refusing to wrap an external model\n";
      return 2;
    }
    if (const char* seed = std::getenv("FSBENCH_SEED"); seed && spec.seed == 0) {
      spec.seed = std::strtoull(seed, nullptr, 10);
    }
    const fsbench::TaskKind task = fsbench::parse_task_kind(argv[5]);
    const fsbench::Dataset loaded = fsbench::load_csv(argv[2], "train");
    fsbench::Schema schema = loaded.schema();
    schema.task = task;
    const fsbench::Dataset train = fsbench::load_csv(argv[2], "train", &schema);
    const auto model = fsbench::fit_model(spec, train);
    const fsbench::Dataset test = fsbench::read_bridge_test_file(argv[3], train);
    fsbench::write_predictions_csv(model->predict(test), task, model->classes(), argv[4]);
  } catch (const fsbench::Error& e) {
    std::cerr << e.code() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
