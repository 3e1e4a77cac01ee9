#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridplan/ccg.hpp"
#include "gridplan/oracle.hpp"

namespace gridplan {

enum class EvalMode { Ccg, Oracle };

struct EvaluationParams {
  int samples = 20;         // sampled distributions for the Sim column
  std::uint64_t seed = 0;
  EvalMode mode = EvalMode::Ccg;
  int draws_per_sample = 200;
  double epsilon = 1e-6;    // inner CCG tolerance in ccg mode
  std::string solver;
};

struct EvaluationReport {
  double wcd = 0.0;    // worst-case expected shed
  double wcs = 0.0;    // worst-case single-scenario shed
  double sim = 0.0;    // mean shed over sampled distributions
  double time_seconds = 0.0;
  int sample_count = 0;
  std::uint64_t seed = 0;
};

EvaluationReport evaluate_configuration(const NetworkInstance& inst,
                                        const Configuration& config,
                                        const AmbiguitySet& ambiguity,
                                        const EvaluationParams& params);

struct DgValueReport {
  double optimal_shed = 0.0;     // planner places DGs
  double random_avg_shed = 0.0;  // mean over random placements
  std::vector<double> random_shed;
  int trials = 0;
};

DgValueReport dg_value_study(const NetworkInstance& inst,
                             const AmbiguitySet& ambiguity, PlanMode mode,
                             int trials, std::uint64_t seed,
                             const CcgParams& ccg);

struct SweepPoint {
  double budget_cost = 0.0;
  int n_z = 0;
  double shed = 0.0;
  double gap = 0.0;
  double time_seconds = 0.0;
  bool converged = false;
};

struct SweepReport {
  std::vector<SweepPoint> points;          // grid order: budgets x n_z
  std::vector<std::string> violations;     // monotonicity breaches beyond gap
};

SweepReport sweep(const NetworkInstance& inst, const AmbiguitySet& ambiguity,
                  const std::vector<double>& budget_grid,
                  const std::vector<int>& nz_grid, const CcgParams& ccg);

struct CompareReport {
  PlanResult dr_plan, ro_plan;
  EvaluationReport dr_eval, ro_eval;  // each config under both criteria
  double wcd_reduction_pct = 0.0;     // DR vs RO on the expectation criterion
  double wcs_reduction_pct = 0.0;
  double sim_reduction_pct = 0.0;
};

CompareReport compare(const NetworkInstance& inst,
                      const AmbiguitySet& ambiguity, const CcgParams& ccg,
                      const EvaluationParams& eval);

}  // namespace gridplan
