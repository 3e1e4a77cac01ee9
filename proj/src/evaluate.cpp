#include "gridplan/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "gridplan/scenario_eval.hpp"

namespace gridplan {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Worst-case expectation of the fixed design. CCG mode reuses the planning
// loop with the design pinned; oracle mode enumerates.
double worst_case_expectation(const NetworkInstance& inst,
                              const Configuration& config,
                              const AmbiguitySet& ambiguity,
                              const EvaluationParams& params) {
  if (params.mode == EvalMode::Oracle)
    return exact_worst_case_expectation(inst, config, ambiguity).value;
  CcgParams cp;
  cp.epsilon = params.epsilon;
  cp.mode = PlanMode::DR;
  cp.solver = params.solver;
  PlanResult r = run_ccg(inst, ambiguity, cp, &config);
  if (!r.converged)
    throw SolverError("inner expectation evaluation did not converge: " +
                      r.diagnostic);
  return r.objective;
}

double worst_case_scenario_value(const NetworkInstance& inst,
                                 const Configuration& config,
                                 const AmbiguitySet& ambiguity,
                                 const EvaluationParams& params) {
  if (params.mode == EvalMode::Oracle)
    return exact_worst_case_scenario(inst, config).second;
  CcgParams cp;
  cp.epsilon = params.epsilon;
  cp.mode = PlanMode::RO;
  cp.solver = params.solver;
  PlanResult r = run_ccg(inst, ambiguity, cp, &config);
  if (!r.converged)
    throw SolverError("inner worst-scenario evaluation did not converge: " +
                      r.diagnostic);
  return r.objective;
}

}  // namespace

EvaluationReport evaluate_configuration(const NetworkInstance& inst,
                                        const Configuration& config,
                                        const AmbiguitySet& ambiguity,
                                        const EvaluationParams& params) {
  const auto start = Clock::now();
  EvaluationReport rep;
  rep.seed = params.seed;
  rep.sample_count = params.samples;

  rep.wcd = worst_case_expectation(inst, config, ambiguity, params);
  rep.wcs = worst_case_scenario_value(inst, config, ambiguity, params);

  double total = 0.0;
  for (int i = 0; i < params.samples; ++i) {
    FiniteDistribution dist = sample_distribution(
        ambiguity, inst, params.seed + static_cast<std::uint64_t>(i),
        params.draws_per_sample);
    std::vector<double> q =
        evaluate_scenarios(inst, config, dist.support, /*parallel=*/true);
    double expect = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) expect += dist.probs[j] * q[j];
    total += expect;
  }
  rep.sim = params.samples > 0 ? total / params.samples : 0.0;
  rep.time_seconds = elapsed(start);
  return rep;
}

DgValueReport dg_value_study(const NetworkInstance& inst,
                             const AmbiguitySet& ambiguity, PlanMode mode,
                             int trials, std::uint64_t seed,
                             const CcgParams& ccg) {
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  DgValueReport rep;
  rep.trials = trials;

  CcgParams cp = ccg;
  cp.mode = mode;
  rep.optimal_shed = run_ccg(inst, ambiguity, cp).objective;

  const std::vector<int> candidates = inst.dg_candidate_indices();
  const int take =
      std::min<int>(inst.budget_dg, static_cast<int>(candidates.size()));
  std::mt19937_64 rng(seed);

  double sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    // Explicit Fisher-Yates prefix; std::shuffle draws are not pinned down
    // by the standard and would break cross-platform determinism.
    std::vector<int> order = candidates;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              rng() % static_cast<std::uint64_t>(
                                          order.size() - i));
      std::swap(order[i], order[j]);
    }
    // Restrict the candidate set to the sampled prefix. The planner then
    // fills the whole budget there, which pins the placement without a
    // separate fixed-w code path.
    NetworkInstance variant = inst;
    for (auto& nd : variant.nodes) nd.dg_candidate = false;
    for (int i = 0; i < take; ++i)
      variant.nodes[order[i]].dg_candidate = true;
    variant.budget_dg = take;
    PlanResult r = run_ccg(variant, ambiguity, cp);
    rep.random_shed.push_back(r.objective);
    sum += r.objective;
  }
  rep.random_avg_shed = trials > 0 ? sum / trials : 0.0;
  return rep;
}

SweepReport sweep(const NetworkInstance& inst, const AmbiguitySet& ambiguity,
                  const std::vector<double>& budget_grid,
                  const std::vector<int>& nz_grid, const CcgParams& ccg) {
  if (budget_grid.empty() || nz_grid.empty())
    throw std::invalid_argument("sweep grids must be nonempty");
  SweepReport rep;
  std::vector<double> slack;  // ub - lb per point, tolerance for monotonicity
  for (double by : budget_grid) {
    for (int nz : nz_grid) {
      NetworkInstance variant = inst;
      variant.budget_cost = by;
      variant.n_z = nz;
      AmbiguitySet amb = ambiguity;
      amb.n_z = nz;
      PlanResult r = run_ccg(variant, amb, ccg);
      SweepPoint pt;
      pt.budget_cost = by;
      pt.n_z = nz;
      pt.shed = r.objective;
      pt.gap = r.gap;
      pt.time_seconds = r.solve_seconds;
      pt.converged = r.converged;
      rep.points.push_back(pt);
      slack.push_back(std::max(0.0, r.objective - r.lower_bound));
    }
  }

  const int nb = static_cast<int>(budget_grid.size());
  const int nz = static_cast<int>(nz_grid.size());
  auto idx = [nz](int bi, int zi) { return bi * nz + zi; };

  // More budget should not hurt, more admissible outages should not help.
  // Optimality slack on both points is forgiven before flagging.
  for (int zi = 0; zi < nz; ++zi) {
    for (int bi = 0; bi < nb; ++bi) {
      for (int bj = 0; bj < nb; ++bj) {
        if (budget_grid[bj] <= budget_grid[bi]) continue;
        const SweepPoint& lo = rep.points[idx(bi, zi)];
        const SweepPoint& hi = rep.points[idx(bj, zi)];
        double tol = slack[idx(bi, zi)] + slack[idx(bj, zi)] +
                     1e-6 * std::max(1.0, std::abs(lo.shed));
        if (hi.shed > lo.shed + tol)
          rep.violations.push_back(
              "shed rose with budget at N_z=" + std::to_string(nz_grid[zi]) +
              ": B_y=" + fmt6(budget_grid[bi]) + " gives " + fmt6(lo.shed) +
              ", B_y=" + fmt6(budget_grid[bj]) + " gives " + fmt6(hi.shed));
      }
    }
  }
  for (int bi = 0; bi < nb; ++bi) {
    for (int zi = 0; zi < nz; ++zi) {
      for (int zj = 0; zj < nz; ++zj) {
        if (nz_grid[zj] <= nz_grid[zi]) continue;
        const SweepPoint& lo = rep.points[idx(bi, zi)];
        const SweepPoint& hi = rep.points[idx(bi, zj)];
        double tol = slack[idx(bi, zi)] + slack[idx(bi, zj)] +
                     1e-6 * std::max(1.0, std::abs(hi.shed));
        if (hi.shed < lo.shed - tol)
          rep.violations.push_back(
              "shed fell with outage budget at B_y=" + fmt6(budget_grid[bi]) +
              ": N_z=" + std::to_string(nz_grid[zi]) + " gives " +
              fmt6(lo.shed) + ", N_z=" + std::to_string(nz_grid[zj]) +
              " gives " + fmt6(hi.shed));
      }
    }
  }
  return rep;
}

CompareReport compare(const NetworkInstance& inst,
                      const AmbiguitySet& ambiguity, const CcgParams& ccg,
                      const EvaluationParams& eval) {
  CompareReport rep;
  CcgParams dr = ccg;
  dr.mode = PlanMode::DR;
  CcgParams ro = ccg;
  ro.mode = PlanMode::RO;
  rep.dr_plan = run_ccg(inst, ambiguity, dr);
  rep.ro_plan = run_ccg(inst, ambiguity, ro);
  rep.dr_eval = evaluate_configuration(inst, rep.dr_plan.config, ambiguity, eval);
  rep.ro_eval = evaluate_configuration(inst, rep.ro_plan.config, ambiguity, eval);

  auto pct = [](double dr_v, double ro_v) {
    if (std::abs(ro_v) <= 1e-12) return 0.0;
    return 100.0 * (ro_v - dr_v) / ro_v;
  };
  rep.wcd_reduction_pct = pct(rep.dr_eval.wcd, rep.ro_eval.wcd);
  rep.wcs_reduction_pct = pct(rep.dr_eval.wcs, rep.ro_eval.wcs);
  rep.sim_reduction_pct = pct(rep.dr_eval.sim, rep.ro_eval.sim);
  return rep;
}

}  // namespace gridplan
