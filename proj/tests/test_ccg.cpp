#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "gridplan/ccg.hpp"
#include "gridplan/oracle.hpp"
#include "gridplan/scenario_eval.hpp"

using namespace gridplan;

namespace {

NetworkInstance fixture(const char* name) {
  return load_instance(std::string(GRIDPLAN_DATA_DIR) + "/" + name);
}

CcgParams tight(PlanMode mode = PlanMode::DR) {
  CcgParams p;
  p.epsilon = 1e-6;
  p.mode = mode;
  return p;
}

void check_bound_discipline(const PlanResult& r) {
  double lb = -1e300, ub = 1e300;
  for (const auto& it : r.state.history) {
    CHECK(it.lb >= lb - 1e-9);
    CHECK(it.ub <= ub + 1e-9);
    CHECK(it.lb <= it.ub + 1e-6);
    lb = it.lb;
    ub = it.ub;
  }
}

}  // namespace

TEST_CASE("planning matches hand optima on the one-line fixture") {
  NetworkInstance inst = fixture("case02.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);

  PlanResult dr = run_ccg(inst, amb, tight());
  CHECK(dr.converged);
  CHECK(dr.objective == doctest::Approx(50.0));
  CHECK(dr.lower_bound == doctest::Approx(50.0));
  check_bound_discipline(dr);

  PlanResult ro = run_ccg(inst, amb, tight(PlanMode::RO));
  CHECK(ro.converged);
  CHECK(ro.objective == doctest::Approx(100.0));
  check_bound_discipline(ro);
}

TEST_CASE("planning matches the enumeration oracle") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);

  PlanResult dr = run_ccg(inst, amb, tight());
  REQUIRE(dr.converged);
  CHECK(dr.objective == doctest::Approx(34.0).epsilon(1e-5));
  CHECK(is_spanning_tree(augment(inst), dr.config.y));
  CHECK(within_budgets(inst, dr.config));
  check_bound_discipline(dr);

  PlanResult ro = run_ccg(inst, amb, tight(PlanMode::RO));
  REQUIRE(ro.converged);
  CHECK(ro.objective == doctest::Approx(120.0).epsilon(1e-5));

  ExactPlan oracle = exact_plan(inst, amb, PlanMode::DR);
  CHECK(std::abs(dr.objective - oracle.objective) <=
        1e-5 * std::max(1.0, std::abs(oracle.objective)));
  // the oracle value must live inside every iteration's bracket
  for (const auto& it : dr.state.history) {
    CHECK(oracle.objective >= it.lb - 1e-6);
    CHECK(oracle.objective <= it.ub + 1e-6);
  }
}

TEST_CASE("no admissible failures collapses to one iteration") {
  NetworkInstance inst = fixture("case04.json");
  inst.n_z = 0;
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanResult r = run_ccg(inst, amb, tight());
  CHECK(r.converged);
  CHECK(r.state.history.size() == 1);
  CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("vanishing failure probability pins the nominal scenario") {
  NetworkInstance inst = fixture("case04.json");
  for (auto& l : inst.lines) l.mu_max.assign(inst.periods, 0.0);
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanResult r = run_ccg(inst, amb, tight());
  REQUIRE(r.converged);
  double nominal =
      evaluate_scenario(inst, r.config, ContingencyScenario::all_ones(inst));
  CHECK(r.objective == doctest::Approx(nominal).epsilon(1e-9));
}

TEST_CASE("pinned configuration turns planning into evaluation") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanResult free = run_ccg(inst, amb, tight());
  REQUIRE(free.converged);

  PlanResult pinned = run_ccg(inst, amb, tight(), &free.config);
  REQUIRE(pinned.converged);
  CHECK(pinned.objective == doctest::Approx(free.objective).epsilon(1e-6));
  CHECK(pinned.config.y == free.config.y);
  CHECK(pinned.config.w == free.config.w);

  // a dominated design cannot beat the optimum
  Configuration worse;
  worse.y = {1, 1, 0, 1, 0};
  worse.w = std::vector<std::uint8_t>(4, 0);
  PlanResult wres = run_ccg(inst, amb, tight(), &worse);
  REQUIRE(wres.converged);
  CHECK(wres.objective >= free.objective - 1e-6);
}

TEST_CASE("repeat runs are bit-identical") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanResult a = run_ccg(inst, amb, tight());
  PlanResult b = run_ccg(inst, amb, tight());
  CHECK(a.objective == b.objective);
  CHECK(a.lower_bound == b.lower_bound);
  CHECK(a.state.history.size() == b.state.history.size());
  for (std::size_t i = 0; i < a.state.history.size(); ++i) {
    CHECK(a.state.history[i].scenario == b.state.history[i].scenario);
    CHECK(a.state.history[i].lb == b.state.history[i].lb);
    CHECK(a.state.history[i].ub == b.state.history[i].ub);
  }
  CHECK(a.config.y == b.config.y);
  CHECK(a.config.w == b.config.w);
}

TEST_CASE("worst-case distribution recovery closes the loop") {
  NetworkInstance inst = fixture("case02.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanResult r = run_ccg(inst, amb, tight());
  REQUIRE(r.converged);
  WorstCaseDistribution wcd = extract_worst_case_distribution(inst, amb, r);

  // mu = 0.5 on the only line: half the mass on failure, half on repair
  REQUIRE(wcd.support.size() == 2);
  double total = 0.0;
  for (double p : wcd.probs) {
    CHECK(p >= -1e-9);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(wcd.expected_shed == doctest::Approx(50.0).epsilon(1e-6));

  double expect = 0.0;
  for (std::size_t j = 0; j < wcd.support.size(); ++j)
    expect += wcd.probs[j] * evaluate_scenario(inst, r.config, wcd.support[j]);
  CHECK(expect == doctest::Approx(r.objective).epsilon(1e-5));

  CHECK_THROWS_AS(
      extract_worst_case_distribution(inst, amb, PlanResult{}),
      std::invalid_argument);
}

TEST_CASE("expired time limit reports instead of throwing") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams p = tight();
  p.time_limit = 1e-6;
  PlanResult r = run_ccg(inst, amb, p);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.diagnostic.empty());
}
