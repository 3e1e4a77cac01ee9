#include <random>

#include "doctest.h"
#include "gridplan/dualize.hpp"
#include "gridplan/solver.hpp"

using namespace gridplan;

namespace {

// Random bounded-feasible LP: box-bounded variables, mixed-sense rows kept
// feasible at the box midpoint so the instance never turns infeasible.
LinearModel random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvar(2, 6), nrow(1, 8), pick(0, 2);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), off(0.5, 4.0);
  LinearModel m;
  int n = nvar(rng);
  std::vector<double> mid(n);
  for (int j = 0; j < n; ++j) {
    double lo = coef(rng), hi = lo + off(rng);
    m.add_var("x[" + std::to_string(j) + "]", lo, hi);
    mid[j] = 0.5 * (lo + hi);
  }
  int rcount = nrow(rng);
  for (int i = 0; i < rcount; ++i) {
    std::vector<LinTerm> terms;
    double at_mid = 0.0;
    for (int j = 0; j < n; ++j) {
      double c = coef(rng);
      if (std::abs(c) < 0.3) continue;
      terms.push_back({j, c});
      at_mid += c * mid[j];
    }
    if (terms.empty()) continue;
    switch (pick(rng)) {
      case 0:
        m.add_row("r[" + std::to_string(i) + "]", terms, RowSense::Le,
                  at_mid + off(rng));
        break;
      case 1:
        m.add_row("r[" + std::to_string(i) + "]", terms, RowSense::Ge,
                  at_mid - off(rng));
        break;
      default:
        m.add_row("r[" + std::to_string(i) + "]", terms, RowSense::Eq, at_mid);
        break;
    }
  }
  std::vector<LinTerm> obj;
  for (int j = 0; j < n; ++j) obj.push_back({j, coef(rng)});
  m.set_objective(pick(rng) == 0 ? ObjSense::Max : ObjSense::Min, obj);
  return m;
}

}  // namespace

TEST_CASE("textbook dual of min x st x >= 3") {
  LinearModel m;
  int x = m.add_var("x", 0.0, kInf);
  m.add_row("c", {{x, 1.0}}, RowSense::Ge, 3.0);
  m.set_objective(ObjSense::Min, {{x, 1.0}});
  auto d = dualize(m);
  // max 3 pi st pi <= 1, pi >= 0
  REQUIRE(d.vars().size() == 1);
  CHECK(d.vars()[0].name == "pi[c]");
  CHECK(d.vars()[0].lb == 0.0);
  CHECK(d.obj_sense() == ObjSense::Max);
  REQUIRE(d.rows().size() == 1);
  CHECK(d.rows()[0].name == "dc[x]");
  CHECK(d.rows()[0].sense == RowSense::Le);
  CHECK(d.rows()[0].rhs == doctest::Approx(1.0));
  auto res = solve(d);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(3.0));
}

TEST_CASE("sign conventions for a min primal") {
  LinearModel m;
  int x = m.add_var("x", -kInf, kInf);
  int y = m.add_var("y", -kInf, 0.0);
  m.add_row("le", {{x, 1.0}}, RowSense::Le, 1.0);
  m.add_row("ge", {{x, 1.0}, {y, 1.0}}, RowSense::Ge, -5.0);
  m.add_row("eq", {{y, 1.0}}, RowSense::Eq, -1.0);
  m.set_objective(ObjSense::Min, {{x, 1.0}, {y, 1.0}});
  auto d = dualize(m);
  CHECK(d.vars()[d.var_index("pi[le]")].ub == 0.0);
  CHECK(d.vars()[d.var_index("pi[le]")].lb == -kInf);
  CHECK(d.vars()[d.var_index("pi[ge]")].lb == 0.0);
  CHECK(d.vars()[d.var_index("pi[eq]")].lb == -kInf);
  CHECK(d.vars()[d.var_index("pi[eq]")].ub == kInf);
  CHECK(d.rows()[d.row_index("dc[x]")].sense == RowSense::Eq);   // free var
  CHECK(d.rows()[d.row_index("dc[y]")].sense == RowSense::Ge);   // <= 0 var
}

TEST_CASE("integrality rejected") {
  LinearModel m;
  m.add_binary("b");
  CHECK_THROWS(dualize(m));
}

TEST_CASE("finite box bounds materialize as rows") {
  LinearModel m;
  m.add_var("x", 1.0, 5.0);
  m.set_objective(ObjSense::Min, {{0, 1.0}});
  auto d = dualize(m);
  CHECK(d.var_index("pi[lb[x]]") >= 0);
  CHECK(d.var_index("pi[ub[x]]") >= 0);
  auto res = solve(d);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
}

TEST_CASE("strong duality and bidual on random LPs") {
  std::mt19937_64 rng(20240811);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LinearModel m = random_lp(rng);
    auto pres = solve(m);
    if (pres.status != SolveStatus::Optimal) continue;  // rare unbounded draw
    ++solved;
    auto d = dualize(m);
    auto dres = solve(d);
    REQUIRE(dres.status == SolveStatus::Optimal);
    double scale = std::max(1.0, std::abs(pres.objective));
    CHECK(std::abs(pres.objective - dres.objective) / scale < 1e-6);
    auto dd = dualize(d);
    auto ddres = solve(dd);
    REQUIRE(ddres.status == SolveStatus::Optimal);
    CHECK(std::abs(pres.objective - ddres.objective) / scale < 1e-6);
  }
  CHECK(solved >= 40);  // the generator keeps instances feasible and bounded
}

TEST_CASE("strong duality identity via dual values of the primal solve") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    LinearModel m = random_lp(rng);
    auto pres = solve(m);
    if (pres.status != SolveStatus::Optimal) continue;
    REQUIRE(pres.has_duals());
    // complementary slackness: dual nonzero only on binding rows
    for (std::size_t i = 0; i < m.rows().size(); ++i) {
      const auto& r = m.rows()[i];
      double act = 0.0;
      for (const auto& t : r.terms) act += t.coef * pres.primal[t.var];
      double slack = r.rhs - act;
      if (r.sense != RowSense::Eq && std::abs(pres.dual[i]) > 1e-7)
        CHECK(std::abs(slack) < 1e-6);
    }
  }
}
