#include "gridplan/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridplan/dualize.hpp"
#include "gridplan/mccormick.hpp"

namespace gridplan {

namespace {

// "p" + pre "3," + {1,0,2} -> "p[3,1,0,2]". The prefix carries its own comma.
std::string nm(const char* sym, const std::string& pre,
               std::initializer_list<int> ids) {
  std::string s(sym);
  s += '[';
  s += pre;
  bool sep = false;
  for (int i : ids) {
    if (sep) s += ',';
    s += std::to_string(i);
    sep = true;
  }
  s += ']';
  return s;
}

struct UnionFind {
  std::vector<int> parent;
  int comps;
  explicit UnionFind(int n) : parent(n), comps(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    --comps;
    return true;
  }
};

// (line, direction) pairs delivering into / leaving each node index.
// Direction 0 follows the stored (from, to) orientation.
struct Incidence {
  std::vector<std::vector<std::pair<int, int>>> into, outof;
  explicit Incidence(const NetworkInstance& inst)
      : into(inst.nodes.size()), outof(inst.nodes.size()) {
    for (int l = 0; l < static_cast<int>(inst.lines.size()); ++l) {
      int a = inst.node_index(inst.lines[l].from);
      int b = inst.node_index(inst.lines[l].to);
      outof[a].push_back({l, 0});
      into[b].push_back({l, 0});
      outof[b].push_back({l, 1});
      into[a].push_back({l, 1});
    }
  }
};

// One restoration block. Exactly one of three parameterizations:
//   fixed + zdata    plain LP for a given config and scenario
//   fixed + links    LP with the scenario symbolic in the rhs
//   master_vars + zdata  block inside the master, y/w are variables
struct BlockSpec {
  std::string pre;
  const Configuration* fixed = nullptr;
  bool master_vars = false;
  const ContingencyScenario* zdata = nullptr;
  std::vector<ZLink>* links = nullptr;
  std::vector<int>* shed = nullptr;
  std::vector<int>* slack = nullptr;
};

void add_restoration_block(LinearModel& m, const NetworkInstance& inst,
                           const BlockSpec& bs) {
  const int nl = static_cast<int>(inst.lines.size());
  const int nn = static_cast<int>(inst.nodes.size());
  const int T = inst.periods;
  const std::string& pre = bs.pre;

  if (bs.fixed) {
    if (bs.fixed->y.size() != inst.lines.size() ||
        bs.fixed->w.size() != inst.nodes.size())
      throw std::invalid_argument("configuration size mismatch");
  }

  for (int l = 0; l < nl; ++l)
    for (int d = 0; d < 2; ++d)
      for (int t = 0; t < T; ++t) {
        m.add_var(nm("p", pre, {l, d, t}), 0.0, kInf);
        m.add_var(nm("q", pre, {l, d, t}), 0.0, kInf);
      }
  for (int n = 0; n < nn; ++n) {
    const NodeSpec& nd = inst.nodes[n];
    if (!nd.is_substation && !nd.dg_candidate) continue;
    for (int t = 0; t < T; ++t) {
      m.add_var(nm("xp", pre, {n, t}), 0.0, kInf);
      m.add_var(nm("xq", pre, {n, t}), 0.0, kInf);
    }
  }
  for (int n = 0; n < nn; ++n)
    for (int t = 0; t < T; ++t) {
      m.add_var(nm("v", pre, {n, t}), -kInf, kInf);
      int si = m.add_var(nm("s", pre, {n, t}), 0.0, kInf);
      int qi = m.add_var(nm("sq", pre, {n, t}), 0.0, kInf);
      if (bs.shed) bs.shed->push_back(si);
      if (bs.slack) bs.slack->push_back(qi);
    }

  const Incidence inc(inst);
  for (int n = 0; n < nn; ++n) {
    const NodeSpec& nd = inst.nodes[n];
    for (int t = 0; t < T; ++t) {
      std::vector<LinTerm> tp, tq;
      for (auto [l, d] : inc.into[n]) {
        tp.push_back({m.var_index(nm("p", pre, {l, d, t})), 1.0});
        tq.push_back({m.var_index(nm("q", pre, {l, d, t})), 1.0});
      }
      for (auto [l, d] : inc.outof[n]) {
        tp.push_back({m.var_index(nm("p", pre, {l, d, t})), -1.0});
        tq.push_back({m.var_index(nm("q", pre, {l, d, t})), -1.0});
      }
      int xpi = m.var_index(nm("xp", pre, {n, t}));
      if (xpi >= 0) {
        tp.push_back({xpi, 1.0});
        tq.push_back({m.var_index(nm("xq", pre, {n, t})), 1.0});
      }
      tp.push_back({m.var_index(nm("s", pre, {n, t})), 1.0});
      tq.push_back({m.var_index(nm("sq", pre, {n, t})), 1.0});
      m.add_row(nm("balp", pre, {n, t}), std::move(tp), RowSense::Eq,
                nd.load_p[t]);
      m.add_row(nm("balq", pre, {n, t}), std::move(tq), RowSense::Eq,
                nd.load_q[t]);
    }
  }

  for (int l = 0; l < nl; ++l) {
    const LineSpec& ln = inst.lines[l];
    const double yv = bs.fixed ? static_cast<double>(bs.fixed->y[l]) : 0.0;
    const int yvar = bs.master_vars ? m.var_index(nm("y", "", {l})) : -1;
    for (int d = 0; d < 2; ++d)
      for (int t = 0; t < T; ++t) {
        const int zv = bs.zdata ? bs.zdata->z(l, t) : 0;
        {
          std::vector<LinTerm> terms{
              {m.var_index(nm("p", pre, {l, d, t})), 1.0}};
          double rhs = 0.0;
          if (bs.master_vars) {
            if (zv) terms.push_back({yvar, -ln.cap_p});
          } else if (bs.zdata) {
            rhs = ln.cap_p * yv * zv;
          }
          int row = m.add_row(nm("pcap", pre, {l, d, t}), std::move(terms),
                              RowSense::Le, rhs);
          if (bs.links && ln.cap_p * yv != 0.0)
            bs.links->push_back({row, l, t, ln.cap_p * yv});
        }
        {
          std::vector<LinTerm> terms{
              {m.var_index(nm("q", pre, {l, d, t})), 1.0}};
          double rhs = 0.0;
          if (bs.master_vars) {
            if (zv) terms.push_back({yvar, -ln.cap_q});
          } else if (bs.zdata) {
            rhs = ln.cap_q * yv * zv;
          }
          int row = m.add_row(nm("qcap", pre, {l, d, t}), std::move(terms),
                              RowSense::Le, rhs);
          if (bs.links && ln.cap_q * yv != 0.0)
            bs.links->push_back({row, l, t, ln.cap_q * yv});
        }
      }
  }

  // Voltage drop along an operating line. Skipped entirely for lines a fixed
  // config leaves unbuilt; in the master the rows exist only where the
  // scenario keeps the line up and a big-M on y relaxes them when unbuilt.
  for (int l = 0; l < nl; ++l) {
    const LineSpec& ln = inst.lines[l];
    const int a = inst.node_index(ln.from);
    const int b = inst.node_index(ln.to);
    const double M = voltage_big_m(inst, ln);
    const double fp = ln.resistance / inst.v_ref;
    const double fq = ln.reactance / inst.v_ref;
    const bool built = bs.fixed && bs.fixed->y[l];
    for (int t = 0; t < T; ++t) {
      if (bs.master_vars) {
        if (!bs.zdata->z(l, t)) continue;
      } else if (!built) {
        continue;
      }
      auto expr = [&](double sign) {
        return std::vector<LinTerm>{
            {m.var_index(nm("v", pre, {b, t})), sign},
            {m.var_index(nm("v", pre, {a, t})), -sign},
            {m.var_index(nm("p", pre, {l, 0, t})), sign * fp},
            {m.var_index(nm("p", pre, {l, 1, t})), -sign * fp},
            {m.var_index(nm("q", pre, {l, 0, t})), sign * fq},
            {m.var_index(nm("q", pre, {l, 1, t})), -sign * fq}};
      };
      if (bs.master_vars) {
        auto hi = expr(1.0);
        hi.push_back({m.var_index(nm("y", "", {l})), M});
        m.add_row(nm("vhi", pre, {l, t}), std::move(hi), RowSense::Le, M);
        auto lo = expr(-1.0);
        lo.push_back({m.var_index(nm("y", "", {l})), M});
        m.add_row(nm("vlo", pre, {l, t}), std::move(lo), RowSense::Le, M);
      } else if (bs.zdata) {
        const double rhs = M * (1.0 - bs.zdata->z(l, t));
        m.add_row(nm("vhi", pre, {l, t}), expr(1.0), RowSense::Le, rhs);
        m.add_row(nm("vlo", pre, {l, t}), expr(-1.0), RowSense::Le, rhs);
      } else {
        int r1 = m.add_row(nm("vhi", pre, {l, t}), expr(1.0), RowSense::Le, M);
        bs.links->push_back({r1, l, t, -M});
        int r2 = m.add_row(nm("vlo", pre, {l, t}), expr(-1.0), RowSense::Le, M);
        bs.links->push_back({r2, l, t, -M});
      }
    }
  }

  for (int n = 0; n < nn; ++n) {
    const NodeSpec& nd = inst.nodes[n];
    for (int t = 0; t < T; ++t) {
      int vi = m.var_index(nm("v", pre, {n, t}));
      m.add_row(nm("vmin", pre, {n, t}), {{vi, 1.0}}, RowSense::Ge,
                inst.v_min);
      m.add_row(nm("vmax", pre, {n, t}), {{vi, 1.0}}, RowSense::Le,
                inst.v_max);
      if (nd.is_substation)
        m.add_row(nm("vref", pre, {n, t}), {{vi, 1.0}}, RowSense::Eq, 1.0);
      int xpi = m.var_index(nm("xp", pre, {n, t}));
      if (xpi >= 0) {
        int xqi = m.var_index(nm("xq", pre, {n, t}));
        if (nd.is_substation) {
          m.add_row(nm("xpcap", pre, {n, t}), {{xpi, 1.0}}, RowSense::Le,
                    nd.cap_p);
          m.add_row(nm("xqcap", pre, {n, t}), {{xqi, 1.0}}, RowSense::Le,
                    nd.cap_q);
        } else if (bs.master_vars) {
          int wvar = m.var_index(nm("w", "", {n}));
          m.add_row(nm("xpcap", pre, {n, t}), {{xpi, 1.0}, {wvar, -nd.cap_p}},
                    RowSense::Le, 0.0);
          m.add_row(nm("xqcap", pre, {n, t}), {{xqi, 1.0}, {wvar, -nd.cap_q}},
                    RowSense::Le, 0.0);
        } else {
          const double wv = static_cast<double>(bs.fixed->w[n]);
          m.add_row(nm("xpcap", pre, {n, t}), {{xpi, 1.0}}, RowSense::Le,
                    nd.cap_p * wv);
          m.add_row(nm("xqcap", pre, {n, t}), {{xqi, 1.0}}, RowSense::Le,
                    nd.cap_q * wv);
        }
      }
      m.add_row(nm("scap", pre, {n, t}),
                {{m.var_index(nm("s", pre, {n, t})), 1.0}}, RowSense::Le,
                nd.load_p[t]);
    }
  }
}

void set_shed_objective(LinearModel& m, const std::vector<int>& shed,
                        const std::vector<int>& slack) {
  std::vector<LinTerm> obj;
  obj.reserve(shed.size() + slack.size());
  for (int si : shed) obj.push_back({si, 1.0});
  for (int qi : slack) obj.push_back({qi, kReactivePenalty});
  m.set_objective(ObjSense::Min, std::move(obj));
}

}  // namespace

bool is_spanning_tree(const AugmentedGraph& aug,
                      const std::vector<std::uint8_t>& y) {
  const NetworkInstance& inst = aug.base;
  const int nn = static_cast<int>(inst.nodes.size());
  if (y.size() != inst.lines.size()) return false;
  int built = 0;
  for (auto v : y) built += v ? 1 : 0;
  if (built + static_cast<int>(aug.root_edges.size()) != nn) return false;
  UnionFind uf(nn + 1);
  const int root = nn;
  for (const auto& [rid, sid] : aug.root_edges) {
    (void)rid;
    if (!uf.unite(root, inst.node_index(sid))) return false;
  }
  for (int l = 0; l < static_cast<int>(y.size()); ++l) {
    if (!y[l]) continue;
    if (!uf.unite(inst.node_index(inst.lines[l].from),
                  inst.node_index(inst.lines[l].to)))
      return false;
  }
  return uf.comps == 1;
}

bool within_budgets(const NetworkInstance& inst, const Configuration& config) {
  double cost = 0.0;
  for (int l = 0; l < static_cast<int>(inst.lines.size()); ++l)
    if (config.y[l]) cost += inst.lines[l].cost;
  int placed = 0;
  for (int n = 0; n < static_cast<int>(inst.nodes.size()); ++n) {
    if (!config.w[n]) continue;
    if (!inst.nodes[n].dg_candidate) return false;
    ++placed;
  }
  return cost <= inst.budget_cost + 1e-6 * std::max(1.0, inst.budget_cost) &&
         placed <= inst.budget_dg;
}

double voltage_big_m(const NetworkInstance& inst, const LineSpec& line) {
  return (inst.v_max - inst.v_min) +
         (line.resistance * line.cap_p + line.reactance * line.cap_q) /
             inst.v_ref;
}

double default_dual_bound(const NetworkInstance& inst) {
  return std::min(-1.0, -10.0 * inst.total_load_p());
}

LinearModel build_first_stage(const AugmentedGraph& aug) {
  const NetworkInstance& inst = aug.base;
  const int nl = static_cast<int>(inst.lines.size());
  const int nn = static_cast<int>(inst.nodes.size());
  const int nr = static_cast<int>(aug.root_edges.size());
  const double big = static_cast<double>(nn);  // |N'| - 1

  LinearModel m;
  for (int l = 0; l < nl; ++l) m.add_binary(nm("y", "", {l}));
  for (int n = 0; n < nn; ++n)
    if (inst.nodes[n].dg_candidate) m.add_binary(nm("w", "", {n}));
  for (int l = 0; l < nl; ++l)
    for (int d = 0; d < 2; ++d) m.add_var(nm("f", "", {l, d}), 0.0, kInf);
  for (int k = 0; k < nr; ++k) m.add_var(nm("fr", "", {k}), 0.0, kInf);

  std::vector<LinTerm> rf;
  for (int k = 0; k < nr; ++k)
    rf.push_back({m.var_index(nm("fr", "", {k})), 1.0});
  m.add_row("rootflow", std::move(rf), RowSense::Eq, big);

  const Incidence inc(inst);
  for (int n = 0; n < nn; ++n) {
    std::vector<LinTerm> terms;
    for (auto [l, d] : inc.into[n])
      terms.push_back({m.var_index(nm("f", "", {l, d})), 1.0});
    for (auto [l, d] : inc.outof[n])
      terms.push_back({m.var_index(nm("f", "", {l, d})), -1.0});
    for (int k = 0; k < nr; ++k)
      if (inst.node_index(aug.root_edges[k].second) == n)
        terms.push_back({m.var_index(nm("fr", "", {k})), 1.0});
    m.add_row(nm("flow", "", {n}), std::move(terms), RowSense::Eq, 1.0);
  }

  std::vector<LinTerm> ts;
  for (int l = 0; l < nl; ++l)
    ts.push_back({m.var_index(nm("y", "", {l})), 1.0});
  m.add_row("treesize", std::move(ts), RowSense::Eq,
            static_cast<double>(nn - nr));

  for (int l = 0; l < nl; ++l)
    for (int d = 0; d < 2; ++d)
      m.add_row(nm("fcap", "", {l, d}),
                {{m.var_index(nm("f", "", {l, d})), 1.0},
                 {m.var_index(nm("y", "", {l})), -big}},
                RowSense::Le, 0.0);
  for (int k = 0; k < nr; ++k)
    m.add_row(nm("fcapr", "", {k}), {{m.var_index(nm("fr", "", {k})), 1.0}},
              RowSense::Le, big);

  std::vector<LinTerm> dg;
  for (int n = 0; n < nn; ++n) {
    int wi = m.var_index(nm("w", "", {n}));
    if (wi >= 0) dg.push_back({wi, 1.0});
  }
  m.add_row("dgbudget", std::move(dg), RowSense::Le,
            static_cast<double>(inst.budget_dg));

  std::vector<LinTerm> cb;
  for (int l = 0; l < nl; ++l)
    cb.push_back({m.var_index(nm("y", "", {l})), inst.lines[l].cost});
  m.add_row("costbudget", std::move(cb), RowSense::Le, inst.budget_cost);

  return m;
}

Configuration extract_configuration(const AugmentedGraph& aug,
                                    const LinearModel& model,
                                    const SolveResult& res,
                                    const std::string& prefix) {
  const NetworkInstance& inst = aug.base;
  const int nl = static_cast<int>(inst.lines.size());
  const int nn = static_cast<int>(inst.nodes.size());
  const int nr = static_cast<int>(aug.root_edges.size());
  Configuration c;
  c.y.resize(nl);
  c.w.assign(nn, 0);
  c.f_line.resize(nl);
  c.f_root.resize(nr);
  for (int l = 0; l < nl; ++l) {
    c.y[l] = res.value(model, prefix + nm("y", "", {l})) > 0.5 ? 1 : 0;
    c.f_line[l] = res.value(model, prefix + nm("f", "", {l, 0})) -
                  res.value(model, prefix + nm("f", "", {l, 1}));
  }
  for (int n = 0; n < nn; ++n)
    if (inst.nodes[n].dg_candidate)
      c.w[n] = res.value(model, prefix + nm("w", "", {n})) > 0.5 ? 1 : 0;
  for (int k = 0; k < nr; ++k)
    c.f_root[k] = res.value(model, prefix + nm("fr", "", {k}));
  return c;
}

LinearModel build_restoration(const NetworkInstance& inst,
                              const Configuration& config,
                              const ContingencyScenario& z) {
  LinearModel m;
  BlockSpec bs;
  bs.fixed = &config;
  bs.zdata = &z;
  std::vector<int> shed, slack;
  bs.shed = &shed;
  bs.slack = &slack;
  add_restoration_block(m, inst, bs);
  set_shed_objective(m, shed, slack);
  return m;
}

ParametricRestoration build_restoration_parametric(
    const NetworkInstance& inst, const Configuration& config) {
  ParametricRestoration pr;
  BlockSpec bs;
  bs.fixed = &config;
  bs.links = &pr.links;
  std::vector<int> shed, slack;
  bs.shed = &shed;
  bs.slack = &slack;
  add_restoration_block(pr.lp, inst, bs);
  set_shed_objective(pr.lp, shed, slack);
  return pr;
}

RestorationSolution extract_restoration(const NetworkInstance& inst,
                                        const LinearModel& lp,
                                        const SolveResult& res) {
  const int nl = static_cast<int>(inst.lines.size());
  const int nn = static_cast<int>(inst.nodes.size());
  const int T = inst.periods;
  RestorationSolution r;
  r.p.assign(nl, std::vector<double>(T, 0.0));
  r.q.assign(nl, std::vector<double>(T, 0.0));
  r.xp.assign(nn, std::vector<double>(T, 0.0));
  r.xq.assign(nn, std::vector<double>(T, 0.0));
  r.v.assign(nn, std::vector<double>(T, 0.0));
  r.s.assign(nn, std::vector<double>(T, 0.0));
  auto at = [&](const std::string& name) {
    int i = lp.var_index(name);
    return i < 0 ? 0.0 : res.primal[i];
  };
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t) {
      r.p[l][t] = at(nm("p", "", {l, 0, t})) - at(nm("p", "", {l, 1, t}));
      r.q[l][t] = at(nm("q", "", {l, 0, t})) - at(nm("q", "", {l, 1, t}));
    }
  for (int n = 0; n < nn; ++n)
    for (int t = 0; t < T; ++t) {
      r.xp[n][t] = at(nm("xp", "", {n, t}));
      r.xq[n][t] = at(nm("xq", "", {n, t}));
      r.v[n][t] = at(nm("v", "", {n, t}));
      r.s[n][t] = at(nm("s", "", {n, t}));
      r.shed += r.s[n][t];
      r.reactive_slack += at(nm("sq", "", {n, t}));
    }
  r.objective = r.shed + kReactivePenalty * r.reactive_slack;
  return r;
}

LinearModel build_master(const NetworkInstance& inst, const AugmentedGraph& aug,
                         const std::vector<ContingencyScenario>& pool,
                         const AmbiguitySet& ambiguity, PlanMode mode,
                         const Configuration* fixed) {
  const int nl = static_cast<int>(inst.lines.size());
  const int nn = static_cast<int>(inst.nodes.size());
  const int T = inst.periods;

  LinearModel m = build_first_stage(aug);
  if (fixed) {
    for (int l = 0; l < nl; ++l) {
      double v = fixed->y[l] ? 1.0 : 0.0;
      m.set_var_bounds(m.var_index(nm("y", "", {l})), v, v);
    }
    for (int n = 0; n < nn; ++n) {
      int wi = m.var_index(nm("w", "", {n}));
      if (wi < 0) continue;
      double v = fixed->w[n] ? 1.0 : 0.0;
      m.set_var_bounds(wi, v, v);
    }
  }

  const bool dr = mode == PlanMode::DR;
  // With no cuts beta only hurts the objective and lambda has no floor, so
  // both are pinned to keep the iteration-1 relaxation bounded at 0.
  const bool empty = pool.empty();
  std::vector<std::vector<int>> beta(nl, std::vector<int>(T));
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t)
      beta[l][t] = m.add_var(nm("beta", "", {l, t}), 0.0,
                             dr && !empty ? kInf : 0.0);
  const int lam = m.add_var("lambda", empty ? 0.0 : -kInf, kInf);

  std::vector<LinTerm> obj;
  if (dr)
    for (int l = 0; l < nl; ++l)
      for (int t = 0; t < T; ++t)
        obj.push_back({beta[l][t], ambiguity.mu(l, t) - 1.0});
  obj.push_back({lam, 1.0});
  m.set_objective(ObjSense::Min, std::move(obj));

  for (int j = 0; j < static_cast<int>(pool.size()); ++j) {
    BlockSpec bs;
    bs.pre = std::to_string(j) + ",";
    bs.master_vars = true;
    bs.zdata = &pool[j];
    std::vector<int> shed, slack;
    bs.shed = &shed;
    bs.slack = &slack;
    add_restoration_block(m, inst, bs);
    std::vector<LinTerm> cut{{lam, 1.0}};
    for (int si : shed) cut.push_back({si, -1.0});
    for (int qi : slack) cut.push_back({qi, -kReactivePenalty});
    for (int l = 0; l < nl; ++l)
      for (int t = 0; t < T; ++t)
        if (pool[j].z(l, t)) cut.push_back({beta[l][t], -1.0});
    m.add_row(nm("cut", "", {j}), std::move(cut), RowSense::Ge, 0.0);
  }
  return m;
}

LinearModel build_ro_master(const NetworkInstance& inst,
                            const AugmentedGraph& aug,
                            const std::vector<ContingencyScenario>& pool,
                            const Configuration* fixed) {
  return build_master(inst, aug, pool, AmbiguitySet::from_instance(inst),
                      PlanMode::RO, fixed);
}

SubproblemModel build_subproblem(const NetworkInstance& inst,
                                 const AmbiguitySet& ambiguity,
                                 const Configuration& config,
                                 const std::vector<std::vector<double>>& beta_hat,
                                 double dual_bound_L) {
  const int nl = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  if (!(dual_bound_L < 0.0) || !std::isfinite(dual_bound_L))
    throw std::invalid_argument("dual bound must be finite and negative");
  if (static_cast<int>(beta_hat.size()) != nl)
    throw std::invalid_argument("beta_hat line dimension mismatch");
  for (const auto& row : beta_hat)
    if (static_cast<int>(row.size()) != T)
      throw std::invalid_argument("beta_hat period dimension mismatch");

  ParametricRestoration pr = build_restoration_parametric(inst, config);
  SubproblemModel sm;
  sm.mip = dualize(pr.lp);
  sm.dual_bound = dual_bound_L;

  std::vector<std::vector<int>> z(nl, std::vector<int>(T));
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t)
      z[l][t] = sm.mip.add_binary(nm("z", "", {l, t}));

  for (const ZLink& lk : pr.links) {
    const std::string pname = "pi[" + pr.lp.rows()[lk.row].name + "]";
    const int pi = sm.mip.var_index(pname);
    if (pi < 0) throw std::logic_error("missing dual for linked row " + pname);
    sm.mip.set_var_bounds(pi, dual_bound_L, 0.0);
    sm.bounded_duals.push_back(pi);
    sm.bounded_bits.emplace_back(lk.line, lk.period);
    const int w = mccormick_binary(sm.mip, pi, z[lk.line][lk.period]);
    sm.mip.add_obj_term(w, lk.coef);
    sm.product_names.push_back(sm.mip.vars()[w].name);
  }

  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t)
      sm.mip.add_obj_term(z[l][t], beta_hat[l][t]);

  for (int t = 0; t < T; ++t) {
    std::vector<LinTerm> terms;
    for (int l = 0; l < nl; ++l) terms.push_back({z[l][t], 1.0});
    sm.mip.add_row(nm("nz", "", {t}), std::move(terms), RowSense::Ge,
                   static_cast<double>(nl - ambiguity.n_z));
  }
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < T; ++t)
      for (int d = 1; d <= ambiguity.tau_rst[l] && t + d < T; ++d)
        sm.mip.add_row(nm("rst", "", {l, t, d}),
                       {{z[l][t + d], 1.0}, {z[l][t], -1.0}}, RowSense::Le,
                       0.0);
  return sm;
}

SubproblemModel build_ro_subproblem(const NetworkInstance& inst,
                                    const AmbiguitySet& ambiguity,
                                    const Configuration& config,
                                    double dual_bound_L) {
  std::vector<std::vector<double>> zero(
      inst.lines.size(), std::vector<double>(inst.periods, 0.0));
  return build_subproblem(inst, ambiguity, config, zero, dual_bound_L);
}

ContingencyScenario scenario_from_result(const NetworkInstance& inst,
                                         const LinearModel& mip,
                                         const SolveResult& res) {
  ContingencyScenario z(static_cast<int>(inst.lines.size()), inst.periods);
  for (int l = 0; l < z.lines; ++l)
    for (int t = 0; t < z.periods; ++t)
      z.set(l, t, res.value(mip, nm("z", "", {l, t})) > 0.5 ? 1 : 0);
  return z;
}

SubproblemSolution solve_subproblem(const NetworkInstance& inst,
                                    const AmbiguitySet& ambiguity,
                                    const Configuration& config,
                                    const std::vector<std::vector<double>>& beta_hat,
                                    Solver& solver, const SolveParams& params,
                                    bool lex_tiebreak) {
  const int nl = static_cast<int>(inst.lines.size());
  const int T = inst.periods;
  double L = default_dual_bound(inst);
  const int max_retries = 6;

  SubproblemModel sm;
  SolveResult res;
  SubproblemSolution out;
  double prev_obj = -kInf;
  for (int attempt = 0;; ++attempt) {
    sm = build_subproblem(inst, ambiguity, config, beta_hat, L);
    res = solver.solve(sm.mip, params);
    if (res.status != SolveStatus::Optimal)
      throw SolverError(std::string("subproblem solve failed: ") +
                        to_string(res.status));
    // A dual parked at L on a failed bit is harmless: its product is zero
    // either way. Only an operating bit can have its product clamped.
    bool clamped = false;
    const double edge = 1e-6 * std::abs(L);
    for (std::size_t i = 0; i < sm.bounded_duals.size(); ++i) {
      const auto [bl, bt] = sm.bounded_bits[i];
      const int zi = sm.mip.var_index(nm("z", "", {bl, bt}));
      if (res.primal[zi] > 0.5 && res.primal[sm.bounded_duals[i]] <= L + edge) {
        clamped = true;
        break;
      }
    }
    if (!clamped) {
      out.retries = attempt;
      break;
    }
    // Degenerate duals may sit at any bound. If a tenfold wider box left the
    // objective unchanged, the clamp cut nothing off.
    if (attempt > 0 &&
        res.objective <= prev_obj + 1e-9 * std::max(1.0, std::abs(prev_obj))) {
      out.retries = attempt;
      break;
    }
    if (attempt >= max_retries)
      throw SolverError("subproblem dual bound active after retries");
    prev_obj = res.objective;
    L *= 10.0;
  }

  // The envelope must be exact at the incumbent; anything else means the
  // bound logic above failed silently.
  for (const std::string& wn : sm.product_names) {
    const std::string inner = wn.substr(2, wn.size() - 3);
    const auto star = inner.find('*');
    const double wv = res.value(sm.mip, wn);
    const double pv = res.value(sm.mip, inner.substr(0, star));
    const double zv = res.value(sm.mip, inner.substr(star + 1));
    if (std::abs(wv - pv * std::round(zv)) > 1e-5 * std::max(1.0, std::abs(L)))
      throw SolverError("product mismatch at incumbent in " + wn);
  }

  out.scenario = scenario_from_result(inst, sm.mip, res);
  out.value = res.dual_bound;
  out.incumbent = res.objective;
  out.dual_bound_L = L;

  // Among equally worst scenarios prefer the lexicographically smallest bit
  // string, fixing bits greedily. Only worth the extra solves on fixtures.
  if (lex_tiebreak && static_cast<long>(nl) * T <= 64) {
    const double tol = 1e-6 * std::max(1.0, std::abs(res.objective)) + 1e-9;
    LinearModel work = sm.mip;
    for (int l = 0; l < nl; ++l)
      for (int t = 0; t < T; ++t) {
        const int zi = work.var_index(nm("z", "", {l, t}));
        work.set_var_bounds(zi, 0.0, 0.0);
        SolveResult r2 = solver.solve(work, params);
        if (r2.status == SolveStatus::Optimal &&
            r2.objective >= res.objective - tol)
          continue;
        work.set_var_bounds(zi, 1.0, 1.0);
      }
    SolveResult rf = solver.solve(work, params);
    if (rf.status == SolveStatus::Optimal &&
        rf.objective >= res.objective - tol)
      out.scenario = scenario_from_result(inst, work, rf);
  }
  return out;
}

}  // namespace gridplan
