#include "doctest.h"
#include "gridplan/mccormick.hpp"
#include "gridplan/solver.hpp"

using namespace gridplan;

namespace {

// Fix pi and z by bounds, solve a feasibility LP, read w.
double product_at(double L, double pi_val, int z_val) {
  LinearModel m;
  int pi = m.add_var("pi", L, 0.0);
  int z = m.add_binary("z");
  int w = mccormick_binary(m, pi, z);
  m.set_var_bounds(pi, pi_val, pi_val);
  m.set_var_bounds(z, z_val, z_val);
  m.set_objective(ObjSense::Min, {});
  auto res = solve(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  return res.primal[w];
}

}  // namespace

TEST_CASE("six-point sweep is exact") {
  const double L = -10.0;
  for (double pi : {L, L / 2, 0.0})
    for (int z : {0, 1})
      CHECK(product_at(L, pi, z) == doctest::Approx(pi * z).epsilon(1e-12));
}

TEST_CASE("known products") {
  CHECK(product_at(-10.0, -5.0, 1) == doctest::Approx(-5.0));
  CHECK(product_at(-10.0, -5.0, 0) == doctest::Approx(0.0));
}

TEST_CASE("preconditions enforced") {
  LinearModel m;
  int unb = m.add_var("u", -kInf, 0.0);
  int pos = m.add_var("p", -1.0, 1.0);
  int z = m.add_binary("z");
  int x = m.add_var("x", 0.0, 1.0);
  CHECK_THROWS(mccormick_binary(m, unb, z));  // no finite L
  CHECK_THROWS(mccormick_binary(m, pos, z));  // ub not 0
  int ok = m.add_var("ok", -2.0, 0.0);
  CHECK_THROWS(mccormick_binary(m, ok, x));   // z not binary
  CHECK(mccormick_binary(m, ok, z) >= 0);
}

TEST_CASE("maximization picks the exact product, not the envelope") {
  // max w with pi free in [L,0] and z binary: without exactness at
  // integral z the envelope would let w exceed pi z.
  const double L = -4.0;
  LinearModel m;
  int pi = m.add_var("pi", L, 0.0);
  int z = m.add_binary("z");
  int w = mccormick_binary(m, pi, z);
  m.set_var_bounds(pi, -3.0, -3.0);
  m.set_objective(ObjSense::Max, {{w, 1.0}});
  auto res = solve(m);
  REQUIRE(res.status == SolveStatus::Optimal);
  // z = 0 gives w = 0, z = 1 gives w = -3; max is 0
  CHECK(res.objective == doctest::Approx(0.0));
  CHECK(res.primal[z] == doctest::Approx(0.0));
  double prod = res.primal[pi] * res.primal[z];
  CHECK(res.primal[w] == doctest::Approx(prod).epsilon(1e-9));
}
