#include "gridplan/ccg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point a) {
  return std::chrono::duration<double>(Clock::now() - a).count();
}

std::string beta_name(int l, int t) {
  return "beta[" + std::to_string(l) + "," + std::to_string(t) + "]";
}

double moment_constant(const AmbiguitySet& amb,
                       const std::vector<std::vector<double>>& beta) {
  double c = 0.0;
  for (std::size_t l = 0; l < beta.size(); ++l)
    for (std::size_t t = 0; t < beta[l].size(); ++t)
      c += (amb.mu(static_cast<int>(l), static_cast<int>(t)) - 1.0) *
           beta[l][t];
  return c;
}

double restoration_q(const NetworkInstance& inst, const Configuration& config,
                     const ContingencyScenario& z, Solver& solver,
                     const SolveParams& sp) {
  LinearModel lp = build_restoration(inst, config, z);
  SolveResult r = solver.solve(lp, sp);
  if (r.status != SolveStatus::Optimal)
    throw SolverError(std::string("restoration LP not optimal: ") +
                      to_string(r.status));
  return r.objective;
}

}  // namespace

PlanResult run_ccg(const NetworkInstance& inst, const AmbiguitySet& ambiguity,
                   const CcgParams& params, const Configuration* fixed) {
  validate_or_throw(inst);
  if (!(params.epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  auto solver = make_solver(params.solver);
  const AugmentedGraph aug = augment(inst);
  const int nl = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  const auto start = Clock::now();
  const double eps0 = 1e-9;
  const bool verbose = std::getenv("GRIDPLAN_VERBOSE") != nullptr;

  PlanResult out;
  out.mode = params.mode;
  CcgState& st = out.state;
  st.beta.assign(nl, std::vector<double>(T, 0.0));
  std::set<std::string> seen;
  bool have_incumbent = false;

  // Any bit that is down in every pooled scenario is an improving ray for
  // beta, so the all-ones cut goes in up front to keep each master bounded.
  // HiGHS 1.9 with presolve active can mislabel such rays as optimal rather
  // than unbounded, which would skip the reactive injection below.
  st.pool.push_back(ContingencyScenario::all_ones(inst));
  seen.insert(st.pool.back().key());

  auto remaining = [&] { return params.time_limit - seconds_since(start); };
  auto solve_params = [&] {
    SolveParams sp = params.solve;
    if (params.time_limit < kInf)
      sp.time_limit = std::min(sp.time_limit, std::max(1e-3, remaining()));
    return sp;
  };

  while (st.iteration < params.max_iter) {
    ++st.iteration;
    if (params.time_limit < kInf && remaining() <= 0.0) {
      out.diagnostic =
          "time limit before iteration " + std::to_string(st.iteration);
      --st.iteration;
      break;
    }

    // Step 1: master over (g, beta, lambda) plus one block per pooled
    // scenario. The seeded all-ones cut keeps this bounded; the injection
    // below is a safety net in case a solver still reports a ray.
    const auto m0 = Clock::now();
    LinearModel master;
    SolveResult mres;
    for (;;) {
      const auto b0 = Clock::now();
      master = build_master(inst, aug, st.pool, ambiguity, params.mode, fixed);
      out.build_seconds += seconds_since(b0);
      mres = solver->solve(master, solve_params());
      if (mres.status != SolveStatus::Unbounded) break;
      ContingencyScenario ones = ContingencyScenario::all_ones(inst);
      if (seen.count(ones.key()))
        throw SolverError("master unbounded with the all-ones cut present");
      st.pool.push_back(ones);
      seen.insert(ones.key());
    }
    if (mres.status == SolveStatus::Infeasible)
      throw MasterInfeasible(
          "master infeasible: the construction budget cannot buy a spanning "
          "forest, or the pinned design violates first-stage constraints");
    if (mres.status != SolveStatus::Optimal) {
      out.diagnostic = std::string("master stopped: ") + to_string(mres.status);
      break;
    }
    const double master_secs = seconds_since(m0);
    if (verbose)
      std::fprintf(stderr, "[ccg] iter %d master %.2fs lb %.6g\n",
                   st.iteration, master_secs,
                   std::max(st.lb, mres.dual_bound));

    st.lb = std::max(st.lb, mres.dual_bound);
    Configuration ghat = extract_configuration(aug, master, mres);
    std::vector<std::vector<double>> bhat(nl, std::vector<double>(T, 0.0));
    if (params.mode == PlanMode::DR && !st.pool.empty())
      for (int l = 0; l < nl; ++l)
        for (int t = 0; t < T; ++t)
          bhat[l][t] = std::max(0.0, mres.value(master, beta_name(l, t)));

    // Step 2: worst scenario for the incumbent design and prices. A solver
    // stop with the wall clock expired is a reportable non-convergence, not
    // a failure.
    const auto s0 = Clock::now();
    SubproblemSolution sub;
    try {
      sub = solve_subproblem(inst, ambiguity, ghat, bhat, *solver,
                             solve_params(), true);
    } catch (const SolverError&) {
      if (params.time_limit < kInf && remaining() <= 1e-2) {
        out.diagnostic =
            "time limit during subproblem, iteration " +
            std::to_string(st.iteration);
        break;
      }
      throw;
    }
    const double sub_secs = seconds_since(s0);
    if (verbose)
      std::fprintf(stderr, "[ccg] iter %d sub %.2fs value %.6g retries %d\n",
                   st.iteration, sub_secs, sub.value, sub.retries);
    const double cand = sub.value + moment_constant(ambiguity, bhat);
    if (cand < st.ub) {
      st.ub = cand;
      st.incumbent = ghat;
      st.beta = bhat;
      have_incumbent = true;
    }
    st.history.push_back({st.iteration, st.lb, st.ub, sub.scenario.key(),
                          master_secs, sub_secs});

    // Step 3: gap test, with an absolute escape for zero-shed optima.
    const double gap = (st.ub - st.lb) / std::max(st.lb, eps0);
    if (st.ub - st.lb <= 1e-6 || gap <= params.epsilon) {
      out.converged = true;
      break;
    }

    // Step 4: grow the pool. A repeat proves the relaxation is already
    // tight at the incumbent, so stop rather than cycle.
    if (seen.count(sub.scenario.key())) {
      out.converged = true;
      out.diagnostic =
          "subproblem repeated a pooled scenario; bounds already tight";
      break;
    }
    st.pool.push_back(sub.scenario);
    seen.insert(sub.scenario.key());
  }

  if (!out.converged && out.diagnostic.empty())
    out.diagnostic = "iteration limit reached";
  if (have_incumbent) out.config = st.incumbent;
  out.beta = st.beta;
  out.objective = st.ub;
  out.lower_bound = st.lb;
  out.gap = std::isfinite(st.ub) && std::isfinite(st.lb)
                ? (st.ub - st.lb) / std::max(st.lb, eps0)
                : kInf;
  out.solve_seconds = seconds_since(start);
  return out;
}

WorstCaseDistribution extract_worst_case_distribution(
    const NetworkInstance& inst, const AmbiguitySet& ambiguity,
    const PlanResult& result) {
  if (result.mode != PlanMode::DR)
    throw std::invalid_argument("worst-case distribution needs a DR result");
  if (!result.converged)
    throw std::invalid_argument("worst-case distribution needs a converged run");
  auto solver = make_solver("");
  SolveParams sp;
  WorstCaseDistribution wcd;

  const auto& pool = result.state.pool;
  if (pool.empty()) {
    // Converged with no cuts: the one-iteration zero-shed case. Any
    // admissible distribution is worst; the all-ones point mass is the
    // canonical one.
    ContingencyScenario ones = ContingencyScenario::all_ones(inst);
    wcd.expected_shed =
        restoration_q(inst, result.config, ones, *solver, sp);
    wcd.support.push_back(std::move(ones));
    wcd.probs.push_back(1.0);
    return wcd;
  }

  const int nl = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  std::vector<double> q(pool.size());
  for (std::size_t j = 0; j < pool.size(); ++j)
    q[j] = restoration_q(inst, result.config, pool[j], *solver, sp);

  // Final master with g and every recourse block held at the incumbent:
  // only (beta, lambda) remain, and the cut duals are the probabilities.
  LinearModel lp;
  std::vector<std::vector<int>> beta(nl, std::vector<int>(T));
  std::vector<LinTerm> obj;
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t) {
      beta[l][t] = lp.add_var(beta_name(l, t), 0.0, kInf);
      obj.push_back({beta[l][t], ambiguity.mu(l, t) - 1.0});
    }
  const int lam = lp.add_var("lambda", -kInf, kInf);
  obj.push_back({lam, 1.0});
  lp.set_objective(ObjSense::Min, std::move(obj));
  for (std::size_t j = 0; j < pool.size(); ++j) {
    std::vector<LinTerm> terms{{lam, 1.0}};
    for (int l = 0; l < nl; ++l)
      for (int t = 0; t < T; ++t)
        if (pool[j].z(l, t)) terms.push_back({beta[l][t], -1.0});
    lp.add_row("cut[" + std::to_string(j) + "]", std::move(terms),
               RowSense::Ge, q[j]);
  }
  SolveResult r = solver->solve(lp, sp);
  if (r.status != SolveStatus::Optimal || !r.has_duals())
    throw SolverError("residual distribution LP did not solve to optimality");

  wcd.support = pool;
  wcd.probs.resize(pool.size());
  for (std::size_t j = 0; j < pool.size(); ++j) {
    double psi =
        r.dual[lp.row_index("cut[" + std::to_string(j) + "]")];
    wcd.probs[j] = std::max(0.0, psi);
    wcd.expected_shed += wcd.probs[j] * q[j];
  }
  return wcd;
}

}  // namespace gridplan
