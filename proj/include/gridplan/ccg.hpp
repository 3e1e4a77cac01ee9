#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridplan/formulations.hpp"
#include "gridplan/solver.hpp"

namespace gridplan {

struct CcgParams {
  double epsilon = 1e-4;
  int max_iter = 100;
  PlanMode mode = PlanMode::DR;
  SolveParams solve;
  std::string solver;       // backend name, empty = default
  double time_limit = kInf; // whole-run wall limit, seconds
};

struct IterationRecord {
  int iter = 0;
  double lb = 0.0;
  double ub = 0.0;
  std::string scenario;  // key of the subproblem argmax
  double master_seconds = 0.0;
  double sub_seconds = 0.0;
};

struct CcgState {
  double lb = -kInf;
  double ub = kInf;
  std::vector<ContingencyScenario> pool;  // scenarios with recourse blocks
  int iteration = 0;
  std::vector<std::vector<double>> beta;  // [line][t] incumbent
  Configuration incumbent;
  std::vector<IterationRecord> history;
};

struct PlanResult {
  Configuration config;
  std::vector<std::vector<double>> beta;
  double objective = 0.0;  // final upper bound
  double lower_bound = 0.0;
  double gap = 0.0;
  PlanMode mode = PlanMode::DR;
  bool converged = false;
  std::string diagnostic;
  CcgState state;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct MasterInfeasible : std::runtime_error {
  explicit MasterInfeasible(const std::string& what)
      : std::runtime_error(what) {}
};

// Steps 0-4: master gives the lower bound and (g, beta); the dualized
// subproblem gives the scenario and the upper bound update
// UB = min(UB, objSP + sum (mu_max - 1) beta_hat). A duplicate subproblem
// scenario proves convergence and stops with a diagnostic. Passing fixed
// pins the design, turning the loop into inner-problem evaluation.
PlanResult run_ccg(const NetworkInstance& inst, const AmbiguitySet& ambiguity,
                   const CcgParams& params,
                   const Configuration* fixed = nullptr);

struct WorstCaseDistribution {
  std::vector<ContingencyScenario> support;
  std::vector<double> probs;  // psi
  double expected_shed = 0.0;
};

// Proposition-2 recovery: residual LP of the final master with (g, u) fixed,
// psi read off the cut-row duals. Q values on the right-hand sides are
// recomputed with fresh restoration solves.
WorstCaseDistribution extract_worst_case_distribution(
    const NetworkInstance& inst, const AmbiguitySet& ambiguity,
    const PlanResult& result);

}  // namespace gridplan
