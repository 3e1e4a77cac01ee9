#include "gridplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridplan/solver.hpp"

namespace gridplan {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
};

// Forests of the base graph with one substation per component are exactly
// the augmented-graph spanning trees with the root edges contracted.
struct TreeEnum {
  const NetworkInstance& inst;
  std::uint64_t limit;
  int nl, nn, need;
  std::vector<std::uint8_t> sub_comp;  // component holds a substation
  UnionFind uf;
  std::vector<std::uint8_t> y;
  double cost = 0.0;
  std::vector<std::vector<std::uint8_t>> out;

  TreeEnum(const NetworkInstance& inst_, std::uint64_t limit_)
      : inst(inst_), limit(limit_), nl(static_cast<int>(inst_.lines.size())),
        nn(static_cast<int>(inst_.nodes.size())), need(0),
        sub_comp(inst_.nodes.size(), 0), uf(static_cast<int>(inst_.nodes.size())),
        y(inst_.lines.size(), 0) {
    int nr = static_cast<int>(inst.substation_indices().size());
    need = nn - nr;
    for (int n : inst.substation_indices()) sub_comp[n] = 1;
  }

  // Cost of the k cheapest edges at index i or beyond; a lower bound on any
  // completion, ignoring feasibility. Instances here are desk scale.
  double completion_bound(int i, int k) const {
    std::vector<double> costs;
    costs.reserve(nl - i);
    for (int e = i; e < nl; ++e) costs.push_back(inst.lines[e].cost);
    if (static_cast<int>(costs.size()) < k) return kInf;
    std::partial_sort(costs.begin(), costs.begin() + k, costs.end());
    double sum = 0.0;
    for (int e = 0; e < k; ++e) sum += costs[e];
    return sum;
  }

  void emit() {
    if (out.size() >= limit)
      throw EnumerationError("spanning tree enumeration exceeds " +
                                 std::to_string(limit),
                             out.size() + 1);
    out.push_back(y);
  }

  void walk(int i, int chosen) {
    if (chosen == need) {
      emit();
      return;
    }
    if (i == nl) return;
    if (nl - i < need - chosen) return;
    if (cost + completion_bound(i, need - chosen) >
        inst.budget_cost + 1e-9 * std::max(1.0, inst.budget_cost))
      return;

    const LineSpec& ln = inst.lines[i];
    int a = uf.find(inst.node_index(ln.from));
    int b = uf.find(inst.node_index(ln.to));
    if (a != b && !(sub_comp[a] && sub_comp[b])) {
      // include: merge, keeping the substation flag
      std::vector<int> saved_parent = uf.parent;
      std::uint8_t sa = sub_comp[a], sb = sub_comp[b];
      uf.parent[a] = b;
      sub_comp[b] = sa | sb;
      y[i] = 1;
      cost += ln.cost;
      walk(i + 1, chosen + 1);
      cost -= ln.cost;
      y[i] = 0;
      sub_comp[a] = sa;
      sub_comp[b] = sb;
      uf.parent = std::move(saved_parent);
    }
    walk(i + 1, chosen);
  }
};

void place_rec(const std::vector<int>& cand, int budget, std::size_t i,
               std::vector<std::uint8_t>& w, int used,
               std::vector<std::vector<std::uint8_t>>& out) {
  if (i == cand.size()) {
    out.push_back(w);
    return;
  }
  place_rec(cand, budget, i + 1, w, used, out);
  if (used < budget) {
    w[cand[i]] = 1;
    place_rec(cand, budget, i + 1, w, used + 1, out);
    w[cand[i]] = 0;
  }
}

// Fictitious flows on a given forest: every node sinks one unit fed from
// the root through its substation.
void fill_flows(const NetworkInstance& inst, const AugmentedGraph& aug,
                Configuration& c) {
  const int nn = static_cast<int>(inst.nodes.size());
  std::vector<std::vector<std::pair<int, int>>> adj(nn);  // (neighbor, line)
  for (int l = 0; l < static_cast<int>(inst.lines.size()); ++l) {
    if (!c.y[l]) continue;
    int a = inst.node_index(inst.lines[l].from);
    int b = inst.node_index(inst.lines[l].to);
    adj[a].push_back({b, l});
    adj[b].push_back({a, l});
  }
  c.f_line.assign(inst.lines.size(), 0.0);
  c.f_root.assign(aug.root_edges.size(), 0.0);
  std::vector<int> subtree(nn, 0);
  std::vector<std::uint8_t> visited(nn, 0);
  // iterative post-order from each substation
  for (std::size_t k = 0; k < aug.root_edges.size(); ++k) {
    int r = inst.node_index(aug.root_edges[k].second);
    std::vector<std::pair<int, int>> stack{{r, -1}};
    std::vector<std::pair<int, int>> order;  // (node, parent line)
    visited[r] = 1;
    while (!stack.empty()) {
      auto [n, pl] = stack.back();
      stack.pop_back();
      order.push_back({n, pl});
      for (auto [m, l] : adj[n])
        if (!visited[m]) {
          visited[m] = 1;
          stack.push_back({m, l});
        }
    }
    for (std::size_t idx = order.size(); idx-- > 0;) {
      auto [n, pl] = order[idx];
      subtree[n] += 1;
      if (pl >= 0) {
        int a = inst.node_index(inst.lines[pl].from);
        // parent is the endpoint that is not n
        int parent = a == n ? inst.node_index(inst.lines[pl].to) : a;
        subtree[parent] += subtree[n];
        // flow runs parent -> n
        c.f_line[pl] = parent == a ? subtree[n] : -subtree[n];
      }
    }
    c.f_root[k] = subtree[r];
  }
}

std::vector<double> scenario_values(const NetworkInstance& inst,
                                    const Configuration& config,
                                    const std::vector<ContingencyScenario>& zs,
                                    Solver& solver) {
  std::vector<double> q(zs.size());
  SolveParams sp;
  for (std::size_t j = 0; j < zs.size(); ++j) {
    LinearModel lp = build_restoration(inst, config, zs[j]);
    SolveResult r = solver.solve(lp, sp);
    if (r.status != SolveStatus::Optimal)
      throw SolverError(std::string("restoration LP not optimal: ") +
                        to_string(r.status));
    q[j] = r.objective;
  }
  return q;
}

std::string mom_name(int l, int t) {
  return "mom[" + std::to_string(l) + "," + std::to_string(t) + "]";
}

}  // namespace

std::vector<std::vector<std::uint8_t>> enumerate_trees(
    const NetworkInstance& inst, std::uint64_t limit) {
  TreeEnum te(inst, limit);
  te.walk(0, 0);
  return std::move(te.out);
}

std::vector<std::vector<std::uint8_t>> enumerate_dg_placements(
    const NetworkInstance& inst) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> w(inst.nodes.size(), 0);
  place_rec(inst.dg_candidate_indices(), inst.budget_dg, 0, w, 0, out);
  return out;
}

MomentLpSolution exact_worst_case_expectation(const NetworkInstance& inst,
                                              const Configuration& config,
                                              const AmbiguitySet& ambiguity,
                                              std::uint64_t limit) {
  MomentLpSolution sol;
  sol.support = enumerate_scenarios(inst, limit);
  auto solver = make_solver("");
  sol.q = scenario_values(inst, config, sol.support, *solver);

  const int nl = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  const int J = static_cast<int>(sol.support.size());

  // max sum q psi  s.t.  sum psi = 1,  sum psi (1 - z^j) <= mu  — solved as
  // the equivalent min of the negated objective.
  LinearModel lp;
  std::vector<LinTerm> obj, norm;
  for (int j = 0; j < J; ++j) {
    int pj = lp.add_var("psi[" + std::to_string(j) + "]", 0.0, kInf);
    obj.push_back({pj, -sol.q[j]});
    norm.push_back({pj, 1.0});
  }
  lp.set_objective(ObjSense::Min, std::move(obj));
  lp.add_row("norm", std::move(norm), RowSense::Eq, 1.0);
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t) {
      std::vector<LinTerm> terms;
      for (int j = 0; j < J; ++j)
        if (!sol.support[j].z(l, t)) terms.push_back({j, 1.0});
      lp.add_row(mom_name(l, t), std::move(terms), RowSense::Le,
                 ambiguity.mu(l, t));
    }
  SolveResult r = solver->solve(lp, {});
  if (r.status != SolveStatus::Optimal || !r.has_duals())
    throw SolverError("moment LP did not solve to optimality");

  sol.value = -r.objective;
  sol.psi.resize(J);
  for (int j = 0; j < J; ++j) sol.psi[j] = std::max(0.0, r.primal[j]);
  sol.gamma = -r.dual[lp.row_index("norm")];
  sol.beta.assign(nl, std::vector<double>(T, 0.0));
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t)
      sol.beta[l][t] =
          std::max(0.0, -r.dual[lp.row_index(mom_name(l, t))]);
  return sol;
}

std::pair<ContingencyScenario, double> exact_worst_case_scenario(
    const NetworkInstance& inst, const Configuration& config,
    std::uint64_t limit) {
  std::vector<ContingencyScenario> zs = enumerate_scenarios(inst, limit);
  auto solver = make_solver("");
  std::vector<double> q = scenario_values(inst, config, zs, *solver);
  std::size_t best = 0;
  for (std::size_t j = 1; j < zs.size(); ++j)
    if (q[j] > q[best] + 1e-9 * std::max(1.0, std::abs(q[best]))) best = j;
  // enumeration is lexicographic, so the first maximizer is the lex-min tie
  return {zs[best], q[best]};
}

ExactPlan exact_plan(const NetworkInstance& inst, const AmbiguitySet& ambiguity,
                     PlanMode mode, const OracleLimits& limits) {
  validate_or_throw(inst);
  const AugmentedGraph aug = augment(inst);
  std::vector<std::vector<std::uint8_t>> trees =
      enumerate_trees(inst, limits.max_trees);
  std::vector<std::vector<std::uint8_t>> placements =
      enumerate_dg_placements(inst);
  std::vector<ContingencyScenario> zs =
      enumerate_scenarios(inst, limits.max_scenarios);
  auto solver = make_solver("");

  ExactPlan plan;
  plan.trees_examined = trees.size();
  double best = kInf;
  for (const auto& y : trees) {
    for (const auto& w : placements) {
      ++plan.configs_examined;
      Configuration c;
      c.y = y;
      c.w = w;
      fill_flows(inst, aug, c);
      std::vector<double> q = scenario_values(inst, c, zs, *solver);
      double value;
      if (mode == PlanMode::RO) {
        value = 0.0;
        for (double v : q) value = std::max(value, v);
      } else {
        // reuse the moment LP on the precomputed q
        const int nl = static_cast<int>(inst.lines.size());
        const int T = inst.periods;
        LinearModel lp;
        std::vector<LinTerm> obj, norm;
        for (std::size_t j = 0; j < zs.size(); ++j) {
          int pj = lp.add_var("psi[" + std::to_string(j) + "]", 0.0, kInf);
          obj.push_back({pj, -q[j]});
          norm.push_back({pj, 1.0});
        }
        lp.set_objective(ObjSense::Min, std::move(obj));
        lp.add_row("norm", std::move(norm), RowSense::Eq, 1.0);
        for (int l = 0; l < nl; ++l)
          for (int t = 0; t < T; ++t) {
            std::vector<LinTerm> terms;
            for (std::size_t j = 0; j < zs.size(); ++j)
              if (!zs[j].z(l, t))
                terms.push_back({static_cast<int>(j), 1.0});
            lp.add_row(mom_name(l, t), std::move(terms), RowSense::Le,
                       ambiguity.mu(l, t));
          }
        SolveResult r = solver->solve(lp, {});
        if (r.status != SolveStatus::Optimal)
          throw SolverError("moment LP did not solve to optimality");
        value = -r.objective;
      }
      if (value < best - 1e-12) {
        best = value;
        plan.config = std::move(c);
      }
    }
  }
  if (!std::isfinite(best))
    throw ValidationError("no feasible configuration within budgets");
  plan.objective = best;
  return plan;
}

}  // namespace gridplan
