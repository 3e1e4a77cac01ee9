#include <cstdlib>

#include "doctest.h"
#include "gridplan/solver.hpp"

using namespace gridplan;

TEST_CASE("min x st x >= 3 gives 3") {
  LinearModel m;
  int x = m.add_var("x", 0.0, kInf);
  m.add_row("c", {{x, 1.0}}, RowSense::Ge, 3.0);
  m.set_objective(ObjSense::Min, {{x, 1.0}});
  auto res = solve(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(3.0));
  CHECK(res.value(m, "x") == doctest::Approx(3.0));
  REQUIRE(res.has_duals());
  CHECK(res.dual[0] == doctest::Approx(1.0));  // >= row in a min: dual >= 0
}

TEST_CASE("binary bound dominates") {
  LinearModel m;
  int x = m.add_binary("x");
  m.add_row("c", {{x, 1.0}}, RowSense::Le, 5.0);
  m.set_objective(ObjSense::Max, {{x, 1.0}});
  auto res = solve(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(res.dual.empty());  // MIPs carry no duals
}

TEST_CASE("infeasible pair reported") {
  LinearModel m;
  int x = m.add_var("x", -kInf, kInf);
  m.add_row("a", {{x, 1.0}}, RowSense::Le, 0.0);
  m.add_row("b", {{x, 1.0}}, RowSense::Ge, 1.0);
  m.set_objective(ObjSense::Min, {{x, 1.0}});
  CHECK(solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded detected") {
  LinearModel m;
  int x = m.add_var("x", 0.0, kInf);
  m.set_objective(ObjSense::Max, {{x, 1.0}});
  CHECK(solve(m).status == SolveStatus::Unbounded);
}

TEST_CASE("objective offset carried through") {
  LinearModel m;
  int x = m.add_var("x", 0.0, 2.0);
  m.set_objective(ObjSense::Min, {{x, 1.0}}, 10.0);
  auto res = solve(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(10.0));
}

TEST_CASE("equality row dual satisfies strong duality") {
  // min 2a + 3b  st  a + b = 4, a <= 3
  LinearModel m;
  int a = m.add_var("a", 0.0, kInf);
  int b = m.add_var("b", 0.0, kInf);
  m.add_row("sum", {{a, 1.0}, {b, 1.0}}, RowSense::Eq, 4.0);
  m.add_row("cap", {{a, 1.0}}, RowSense::Le, 3.0);
  m.set_objective(ObjSense::Min, {{a, 2.0}, {b, 3.0}});
  auto res = solve(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(9.0));  // a=3, b=1
  REQUIRE(res.has_duals());
  double dual_obj = res.dual[0] * 4.0 + res.dual[1] * 3.0;
  CHECK(dual_obj == doctest::Approx(res.objective));
  CHECK(res.dual[1] <= 1e-9);  // <= row in a min: nonpositive dual
}

TEST_CASE("solver selection") {
  CHECK(make_solver("highs")->name() == "highs");
  CHECK_THROWS_AS((void)make_solver("cplex"), SolverError);
  setenv("GRIDPLAN_SOLVER", "highs", 1);
  CHECK(make_solver()->name() == "highs");
  unsetenv("GRIDPLAN_SOLVER");
}

TEST_CASE("deterministic repeat solve") {
  LinearModel m;
  for (int i = 0; i < 6; ++i)
    m.add_binary("b[" + std::to_string(i) + "]");
  std::vector<LinTerm> all;
  for (int i = 0; i < 6; ++i) all.push_back({i, 1.0 + 0.1 * i});
  m.add_row("pick", all, RowSense::Le, 3.0);
  m.set_objective(ObjSense::Max, all);
  auto r1 = solve(m);
  auto r2 = solve(m);
  REQUIRE(r1.status == SolveStatus::Optimal);
  CHECK(r1.primal == r2.primal);
  CHECK(r1.objective == r2.objective);
}
