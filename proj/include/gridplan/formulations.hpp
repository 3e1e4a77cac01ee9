#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridplan/instance.hpp"
#include "gridplan/linear_model.hpp"
#include "gridplan/scenario.hpp"
#include "gridplan/solver.hpp"

namespace gridplan {

// Weight of the reactive-balance slack. Active load is the only shed
// quantity; the slack keeps every scenario LP feasible and is priced high
// enough to never displace real shedding.
constexpr double kReactivePenalty = 1e6;

enum class PlanMode { DR, RO };

struct Configuration {
  std::vector<std::uint8_t> y;  // per base line
  std::vector<std::uint8_t> w;  // per node, 0 on non-candidates
  std::vector<double> f_line;   // net fictitious flow, stored orientation
  std::vector<double> f_root;   // per root edge
};

// Connected + acyclic + |N'|-1 edges + root edges forced; independent of the
// MILP that produced y.
bool is_spanning_tree(const AugmentedGraph& aug,
                      const std::vector<std::uint8_t>& y);
bool within_budgets(const NetworkInstance& inst, const Configuration& config);

struct RestorationSolution {
  std::vector<std::vector<double>> p, q;    // [line][t], net flow
  std::vector<std::vector<double>> xp, xq;  // [node][t]
  std::vector<std::vector<double>> v, s;    // [node][t]
  double shed = 0.0;            // sum of s
  double reactive_slack = 0.0;  // sum of the balq slack
  double objective = 0.0;       // shed + kReactivePenalty * reactive_slack
};

// Variable/row naming is a public contract (dual extraction keys on it):
//   first stage   y[l], w[n], f[l,d], fr[k]; rows rootflow, flow[n],
//                 treesize, fcap[l,d], fcapr[k], dgbudget, costbudget
//   restoration   p[l,d,t], q[l,d,t], xp[n,t], xq[n,t], v[n,t], s[n,t],
//                 sq[n,t]; rows balp/balq[n,t], pcap/qcap[l,d,t],
//                 vlo/vhi[l,t], vmin/vmax[n,t], vref[n,t], xpcap/xqcap[n,t],
//                 scap[n,t]
//   master        block vars/rows carry a leading scenario index, e.g.
//                 s[j,n,t]; cuts cut[j]; beta[l,t]; lambda
//   subproblem    duals pi[<row>], scenario bits z[l,t], products
//                 w[pi[<row>]*z[l,t]], support rows nz[t], rst[l,t,tau]

LinearModel build_first_stage(const AugmentedGraph& aug);

Configuration extract_configuration(const AugmentedGraph& aug,
                                    const LinearModel& model,
                                    const SolveResult& res,
                                    const std::string& prefix = "");

// Restoration LP for fixed config and scenario; always feasible.
LinearModel build_restoration(const NetworkInstance& inst,
                              const Configuration& config,
                              const ContingencyScenario& z);

RestorationSolution extract_restoration(const NetworkInstance& inst,
                                        const LinearModel& lp,
                                        const SolveResult& res);

// Same LP with the scenario left symbolic: stored rhs is the constant part,
// links carry the per-bit contribution rhs(z) = rhs + sum coef * z[line,t].
struct ZLink {
  int row = -1;
  int line = -1;
  int period = -1;
  double coef = 0.0;
};

struct ParametricRestoration {
  LinearModel lp;
  std::vector<ZLink> links;
};

ParametricRestoration build_restoration_parametric(const NetworkInstance& inst,
                                                   const Configuration& config);

// Master MIP over (y, w, f, beta, lambda, recourse blocks). RO mode pins
// beta to zero. Cuts price the reactive slack exactly as the subproblem
// values it, so both sides of the bound bracket the same function. Passing
// fixed pins y and w (inner-problem evaluation at a given design).
LinearModel build_master(const NetworkInstance& inst, const AugmentedGraph& aug,
                         const std::vector<ContingencyScenario>& pool,
                         const AmbiguitySet& ambiguity, PlanMode mode,
                         const Configuration* fixed = nullptr);

LinearModel build_ro_master(const NetworkInstance& inst,
                            const AugmentedGraph& aug,
                            const std::vector<ContingencyScenario>& pool,
                            const Configuration* fixed = nullptr);

// Dualized inner LP with McCormick products against the scenario bits,
// support rows for the uncertainty set, and the beta_hat * z term. Built by
// generic dualization of the parametric restoration LP.
struct SubproblemModel {
  LinearModel mip;
  double dual_bound = 0.0;            // L used for the products
  std::vector<int> bounded_duals;     // dual vars clamped at L
  std::vector<std::pair<int, int>> bounded_bits;  // (line, period) per dual
  std::vector<std::string> product_names;  // one per McCormick w
};

SubproblemModel build_subproblem(const NetworkInstance& inst,
                                 const AmbiguitySet& ambiguity,
                                 const Configuration& config,
                                 const std::vector<std::vector<double>>& beta_hat,
                                 double dual_bound_L);

SubproblemModel build_ro_subproblem(const NetworkInstance& inst,
                                    const AmbiguitySet& ambiguity,
                                    const Configuration& config,
                                    double dual_bound_L);

struct SubproblemSolution {
  ContingencyScenario scenario;
  double value = 0.0;      // proven bound on max_z { Q + beta z }
  double incumbent = 0.0;  // objective at the returned scenario
  double dual_bound_L = 0.0;
  int retries = 0;
};

// Full Step-2 driver: builds, solves, audits McCormick exactness, retries
// with 10x L when a clamped dual lands on the bound, and (on instances with
// at most 64 scenario bits) refines ties to the lexicographically smallest
// argmax.
SubproblemSolution solve_subproblem(const NetworkInstance& inst,
                                    const AmbiguitySet& ambiguity,
                                    const Configuration& config,
                                    const std::vector<std::vector<double>>& beta_hat,
                                    Solver& solver, const SolveParams& params,
                                    bool lex_tiebreak = true);

ContingencyScenario scenario_from_result(const NetworkInstance& inst,
                                         const LinearModel& mip,
                                         const SolveResult& res);

// -10x total active load; the subproblem retries with 10x growth when a
// dual lands on it.
double default_dual_bound(const NetworkInstance& inst);

double voltage_big_m(const NetworkInstance& inst, const LineSpec& line);

}  // namespace gridplan
