#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gridplan/evaluate.hpp"
#include "gridplan/report.hpp"
#include "gridplan/scenario_eval.hpp"

using namespace gridplan;

namespace {

NetworkInstance fixture(const char* name) {
  return load_instance(std::string(GRIDPLAN_DATA_DIR) + "/" + name);
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "gridplan_test_eval";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parallel scenario evaluation equals the serial reference") {
  NetworkInstance inst = fixture("case04.json");
  Configuration g;
  g.y = {1, 1, 1, 0, 0};
  g.w = {0, 0, 1, 0};
  auto zs = enumerate_scenarios(inst);
  auto serial = evaluate_scenarios(inst, g, zs, false);
  auto parallel = evaluate_scenarios(inst, g, zs, true);
  REQUIRE(serial.size() == zs.size());
  REQUIRE(parallel.size() == zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i)
    CHECK(serial[i] == parallel[i]);  // bitwise, same solves either way
}

TEST_CASE("evaluation criteria sandwich") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp;
  cp.epsilon = 1e-6;
  PlanResult plan = run_ccg(inst, amb, cp);
  REQUIRE(plan.converged);

  EvaluationParams ep;
  ep.samples = 3;
  ep.draws_per_sample = 60;
  ep.seed = 5;
  EvaluationReport rep = evaluate_configuration(inst, plan.config, amb, ep);
  CHECK(rep.sample_count == 3);
  CHECK(rep.sim >= -1e-9);
  // any member of the ambiguity set is dominated by the worst case
  CHECK(rep.sim <= rep.wcd + 1e-6);
  // an expectation never exceeds the worst support point
  CHECK(rep.wcd <= rep.wcs + 1e-6);
  CHECK(rep.wcd == doctest::Approx(plan.objective).epsilon(1e-5));
}

TEST_CASE("oracle and ccg evaluation methods agree") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  Configuration g;
  g.y = {1, 1, 0, 1, 0};
  g.w = {0, 0, 0, 1};
  EvaluationParams ep;
  ep.samples = 2;
  ep.draws_per_sample = 40;
  EvaluationReport via_ccg = evaluate_configuration(inst, g, amb, ep);
  ep.mode = EvalMode::Oracle;
  EvaluationReport via_oracle = evaluate_configuration(inst, g, amb, ep);
  CHECK(via_ccg.wcd == doctest::Approx(via_oracle.wcd).epsilon(1e-5));
  CHECK(via_ccg.wcs == doctest::Approx(via_oracle.wcs).epsilon(1e-5));
  CHECK(via_ccg.sim == doctest::Approx(via_oracle.sim).epsilon(1e-9));
}

TEST_CASE("model comparison favors the expectation criterion it optimizes") {
  NetworkInstance inst = fixture("case02.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp;
  cp.epsilon = 1e-6;
  EvaluationParams ep;
  ep.samples = 2;
  ep.draws_per_sample = 40;
  CompareReport rep = compare(inst, amb, cp, ep);
  REQUIRE(rep.dr_plan.converged);
  REQUIRE(rep.ro_plan.converged);
  CHECK(rep.dr_eval.wcd <= rep.ro_eval.wcd + 1e-5);
  CHECK(rep.ro_eval.wcs <= rep.dr_eval.wcs + 1e-5);
  if (rep.ro_eval.wcd > 1e-12) {
    double pct = 100.0 * (rep.ro_eval.wcd - rep.dr_eval.wcd) / rep.ro_eval.wcd;
    CHECK(rep.wcd_reduction_pct == doctest::Approx(pct).epsilon(1e-9));
  }
}

TEST_CASE("planner-placed DG beats random placement on average") {
  NetworkInstance inst = fixture("case04.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp;
  cp.epsilon = 1e-6;
  DgValueReport rep = dg_value_study(inst, amb, PlanMode::DR, 3, 11, cp);
  CHECK(rep.trials == 3);
  CHECK(static_cast<int>(rep.random_shed.size()) == rep.trials);
  CHECK(rep.optimal_shed <= rep.random_avg_shed + 1e-6);
  double mean = 0.0;
  for (double v : rep.random_shed) mean += v;
  mean /= rep.random_shed.size();
  CHECK(rep.random_avg_shed == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("budget and failure-count sweep directions") {
  NetworkInstance inst = fixture("case02.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp;
  cp.epsilon = 1e-6;
  SweepReport rep = sweep(inst, amb, {1.0}, {0, 1}, cp);
  REQUIRE(rep.points.size() == 2);
  CHECK(rep.points[0].n_z == 0);
  CHECK(rep.points[0].shed == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.points[1].n_z == 1);
  CHECK(rep.points[1].shed == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(rep.violations.empty());
  for (const auto& pt : rep.points) CHECK(pt.converged);
}

TEST_CASE("plan file round trip") {
  NetworkInstance inst = fixture("case02.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp;
  cp.epsilon = 1e-6;
  PlanResult plan = run_ccg(inst, amb, cp);
  REQUIRE(plan.converged);
  auto path = scratch() / "plan_roundtrip.json";
  write_plan(inst, plan, path.string());
  Configuration back = read_plan(inst, path.string());
  CHECK(back.y == plan.config.y);
  CHECK(back.w == plan.config.w);
  CHECK_THROWS_AS(read_plan(inst, (scratch() / "missing.json").string()),
                  ParseError);
}

TEST_CASE("report files carry the documented headers") {
  NetworkInstance inst = fixture("case02.json");
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp;
  cp.epsilon = 1e-6;
  PlanResult plan = run_ccg(inst, amb, cp);
  REQUIRE(plan.converged);

  auto dir = scratch();
  write_trace(plan, (dir / "trace.csv").string());
  std::string trace = slurp(dir / "trace.csv");
  CHECK(trace.rfind("iter,lb,ub,scenario,master_s,sub_s", 0) == 0);

  WorstCaseDistribution wcd = extract_worst_case_distribution(inst, amb, plan);
  write_wcd(inst, wcd, (dir / "wcd.csv").string());
  std::string w = slurp(dir / "wcd.csv");
  CHECK(w.rfind("scenario,affected_lines,probability", 0) == 0);

  SweepReport sr = sweep(inst, amb, {1.0}, {1}, cp);
  write_sweep(sr, (dir / "sweep.csv").string());
  CHECK(slurp(dir / "sweep.csv").rfind("budget_cost,n_z,shed_kw,gap,time_s", 0) ==
        0);
}

TEST_CASE("float rendering is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(50.0) == "50");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    double x = u(rng);
    CHECK(std::stod(format_double(x)) == x);
  }
}
