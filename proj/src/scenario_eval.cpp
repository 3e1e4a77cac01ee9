#include "gridplan/scenario_eval.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace gridplan {

namespace {

double solve_one(const NetworkInstance& inst, const Configuration& config,
                 const ContingencyScenario& z, Solver& solver,
                 const SolveParams& params) {
  LinearModel lp = build_restoration(inst, config, z);
  SolveResult r = solver.solve(lp, params);
  if (r.status != SolveStatus::Optimal)
    throw SolverError(std::string("restoration LP not optimal: ") +
                      to_string(r.status));
  return r.objective;
}

}  // namespace

double evaluate_scenario(const NetworkInstance& inst,
                         const Configuration& config,
                         const ContingencyScenario& z,
                         const SolveParams& params) {
  auto solver = make_solver("");
  return solve_one(inst, config, z, *solver, params);
}

std::vector<double> evaluate_scenarios(const NetworkInstance& inst,
                                       const Configuration& config,
                                       const std::vector<ContingencyScenario>& zs,
                                       bool parallel,
                                       const SolveParams& params) {
  std::vector<double> q(zs.size(), 0.0);
  const long n = static_cast<long>(zs.size());

  if (!parallel) {
    auto solver = make_solver("");
    for (long j = 0; j < n; ++j)
      q[j] = solve_one(inst, config, zs[j], *solver, params);
    return q;
  }

  // Each solve is an independent single-threaded LP stored by index, so the
  // schedule cannot change the result relative to the serial path.
  std::atomic<bool> failed{false};
  std::string first_error;
#pragma omp parallel
  {
    auto solver = make_solver("");
#pragma omp for schedule(dynamic)
    for (long j = 0; j < n; ++j) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        q[j] = solve_one(inst, config, zs[j], *solver, params);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          if (!failed.exchange(true)) first_error = e.what();
        }
      }
    }
  }
  if (failed.load()) throw SolverError("batch evaluation: " + first_error);
  return q;
}

}  // namespace gridplan
