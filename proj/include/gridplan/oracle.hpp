#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gridplan/ccg.hpp"
#include "gridplan/formulations.hpp"
#include "gridplan/scenario.hpp"

namespace gridplan {

// Ground truth by enumeration; desk scale only.

struct MomentLpSolution {
  std::vector<ContingencyScenario> support;  // every admissible scenario
  std::vector<double> q;      // Q(config, z_j) per scenario
  std::vector<double> psi;    // worst-case probabilities
  double gamma = 0.0;         // dual of the normalization row
  std::vector<std::vector<double>> beta;  // duals of the moment rows [l][t]
  double value = 0.0;         // worst-case expectation
};

// max over distributions of E[Q]: solves every restoration LP, then the
// moment LP  max sum psi_j Q_j  s.t.  sum_j psi_j (1 - z^j) <= mu_max,
// sum psi = 1, psi >= 0.
MomentLpSolution exact_worst_case_expectation(const NetworkInstance& inst,
                                              const Configuration& config,
                                              const AmbiguitySet& ambiguity,
                                              std::uint64_t limit = 20000);

// argmax/max of Q over the admissible set; lexicographically smallest
// argmax among ties.
std::pair<ContingencyScenario, double> exact_worst_case_scenario(
    const NetworkInstance& inst, const Configuration& config,
    std::uint64_t limit = 20000);

struct OracleLimits {
  std::uint64_t max_trees = 200000;
  std::uint64_t max_scenarios = 20000;
};

struct ExactPlan {
  Configuration config;
  double objective = 0.0;
  std::uint64_t trees_examined = 0;
  std::uint64_t configs_examined = 0;
};

// Enumerates spanning trees of the augmented graph within budget (recursive
// edge inclusion with cost pruning) crossed with DG placements, scoring each
// by the exact inner problem for the mode.
ExactPlan exact_plan(const NetworkInstance& inst, const AmbiguitySet& ambiguity,
                     PlanMode mode = PlanMode::DR,
                     const OracleLimits& limits = {});

// All in-budget spanning trees as y vectors over base lines.
std::vector<std::vector<std::uint8_t>> enumerate_trees(
    const NetworkInstance& inst, std::uint64_t limit);

std::vector<std::vector<std::uint8_t>> enumerate_dg_placements(
    const NetworkInstance& inst);

}  // namespace gridplan
