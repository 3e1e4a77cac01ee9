// Benchmark the scenario-batch restoration evaluator: serial reference vs
// the OpenMP path, verifying bitwise-equal results while timing both.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gridplan/ccg.hpp"
#include "gridplan/instance.hpp"
#include "gridplan/scenario_eval.hpp"

using namespace gridplan;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Configuration plan_once(const NetworkInstance& inst) {
  // Degenerate ambiguity (no admissible failures) converges in one
  // iteration and still yields a feasible in-budget tree.
  NetworkInstance calm = inst;
  calm.n_z = 0;
  AmbiguitySet amb = AmbiguitySet::from_instance(calm);
  CcgParams cp;
  cp.epsilon = 1e-6;
  PlanResult r = run_ccg(calm, amb, cp);
  return r.config;
}

}  // namespace

int main(int argc, char** argv) {
  std::string instance_path;
  int scenarios = 64;
  int repeats = 3;
  std::uint64_t seed = 0;

  CLI::App app{"serial vs OpenMP scenario evaluation benchmark"};
  app.add_option("--instance", instance_path, "instance JSON path")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--scenarios", scenarios, "batch size");
  app.add_option("--repeats", repeats, "timed repetitions, best is reported");
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  try {
    NetworkInstance inst = load_instance(instance_path);
    AmbiguitySet amb = AmbiguitySet::from_instance(inst);
    Configuration config = plan_once(inst);

    FiniteDistribution dist =
        sample_distribution(amb, inst, seed, std::max(scenarios, 1));
    std::vector<ContingencyScenario> batch;
    for (int i = 0; i < scenarios; ++i)
      batch.push_back(dist.support[i % dist.support.size()]);

    std::printf("instance: %s\n", instance_path.c_str());
    std::printf("scenarios: %d (from %zu distinct)\n", scenarios,
                dist.support.size());
    std::printf("threads: %d\n", omp_get_max_threads());

    // warm both paths once before timing
    std::vector<double> serial =
        evaluate_scenarios(inst, config, batch, false);
    std::vector<double> parallel =
        evaluate_scenarios(inst, config, batch, true);

    double best_serial = 1e300;
    double best_parallel = 1e300;
    for (int r = 0; r < repeats; ++r) {
      double t0 = now_s();
      serial = evaluate_scenarios(inst, config, batch, false);
      best_serial = std::min(best_serial, now_s() - t0);
      t0 = now_s();
      parallel = evaluate_scenarios(inst, config, batch, true);
      best_parallel = std::min(best_parallel, now_s() - t0);
    }

    double max_diff = 0.0;
    for (std::size_t i = 0; i < serial.size(); ++i)
      max_diff = std::max(max_diff, std::abs(serial[i] - parallel[i]));

    std::printf("serial:   %8.3f s\n", best_serial);
    std::printf("parallel: %8.3f s\n", best_parallel);
    std::printf("speedup:  %8.2fx\n",
                best_parallel > 0 ? best_serial / best_parallel : 0.0);
    std::printf("max |serial - parallel|: %g\n", max_diff);
    if (max_diff != 0.0) {
      std::fprintf(stderr, "paths disagree\n");
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
