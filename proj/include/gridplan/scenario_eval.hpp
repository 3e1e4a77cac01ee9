#pragma once

#include <vector>

#include "gridplan/formulations.hpp"
#include "gridplan/solver.hpp"

namespace gridplan {

// Q(config, z) for a batch of scenarios: one independent restoration LP per
// scenario. The parallel path fans the solves out over OpenMP threads with
// results stored by index; the serial path is the reference the tests
// compare against. Identical output either way.
std::vector<double> evaluate_scenarios(const NetworkInstance& inst,
                                       const Configuration& config,
                                       const std::vector<ContingencyScenario>& zs,
                                       bool parallel = true,
                                       const SolveParams& params = {});

double evaluate_scenario(const NetworkInstance& inst,
                         const Configuration& config,
                         const ContingencyScenario& z,
                         const SolveParams& params = {});

}  // namespace gridplan
