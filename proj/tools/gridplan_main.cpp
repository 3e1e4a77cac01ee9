// gridplan: design radial distribution networks and DG placements that
// minimize worst-case expected load shedding, and reproduce the studies
// (model comparison, DG value, budget sweeps) from the command line.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridplan/ccg.hpp"
#include "gridplan/evaluate.hpp"
#include "gridplan/instance.hpp"
#include "gridplan/oracle.hpp"
#include "gridplan/report.hpp"

namespace fs = std::filesystem;
using namespace gridplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConverge = 2;
constexpr int kExitInfeasible = 3;

struct Opts {
  std::string instance;
  std::string out = ".";
  std::string solver;
  std::string mode = "dr";
  std::string method = "ccg";  // evaluate: inner machinery
  std::string plan_path;
  double epsilon = 1e-4;
  double time_limit = 0;  // seconds, 0 = unlimited
  std::uint64_t seed = 0;
  int max_iter = 100;
  int samples = 20;
  int draws = 200;
  int dg_trials = 0;
  std::uint64_t max_trees = 200000;
  std::uint64_t max_scenarios = 20000;
  std::vector<double> budgets;
  std::vector<int> nz_values;
  // generate
  int nodes = 0;
  std::vector<int> subs = {1};
  int dg_count = 0;
  int periods = 24;
  int ties = -1;
  double budget_cost = -1;
  int gen_nz = -1;
};

PlanMode mode_of(const std::string& s) {
  return s == "ro" ? PlanMode::RO : PlanMode::DR;
}

CcgParams ccg_params(const Opts& o) {
  CcgParams cp;
  cp.epsilon = o.epsilon;
  cp.max_iter = o.max_iter;
  cp.mode = mode_of(o.mode);
  cp.solver = o.solver;
  if (o.time_limit > 0) cp.time_limit = o.time_limit;
  return cp;
}

fs::path out_file(const Opts& o, const std::string& name) {
  fs::create_directories(o.out);
  return fs::path(o.out) / name;
}

void print_plan_summary(const char* label, const PlanResult& r) {
  std::printf("%smode: %s\n", label, r.mode == PlanMode::DR ? "dr" : "ro");
  std::printf("%sobjective: %s\n", label, format_double(r.objective).c_str());
  std::printf("%slower_bound: %s\n", label,
              format_double(r.lower_bound).c_str());
  std::printf("%sgap: %s\n", label, format_double(r.gap).c_str());
  std::printf("%siterations: %d\n", label, r.state.iteration);
  std::printf("%sconverged: %s\n", label, r.converged ? "yes" : "no");
  if (!r.diagnostic.empty())
    std::printf("%sdiagnostic: %s\n", label, r.diagnostic.c_str());
  // timing on stderr so stdout stays byte-stable across runs
  std::fprintf(stderr, "%sbuild %.3fs solve %.3fs\n", label, r.build_seconds,
               r.solve_seconds);
}

int cmd_plan(const Opts& o) {
  NetworkInstance inst = load_instance(o.instance);
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanResult r = run_ccg(inst, amb, ccg_params(o));
  write_plan(inst, r, out_file(o, "plan.json").string());
  write_trace(r, out_file(o, "trace.csv").string());
  if (r.mode == PlanMode::DR && r.converged) {
    WorstCaseDistribution wcd = extract_worst_case_distribution(inst, amb, r);
    write_wcd(inst, wcd, out_file(o, "wcd.csv").string());
  }
  print_plan_summary("", r);
  return r.converged ? kExitOk : kExitNoConverge;
}

int cmd_evaluate(const Opts& o) {
  NetworkInstance inst = load_instance(o.instance);
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  Configuration config = read_plan(inst, o.plan_path);
  EvaluationParams ep;
  ep.samples = o.samples;
  ep.seed = o.seed;
  ep.mode = o.method == "oracle" ? EvalMode::Oracle : EvalMode::Ccg;
  ep.draws_per_sample = o.draws;
  ep.epsilon = o.epsilon;
  ep.solver = o.solver;
  EvaluationReport rep = evaluate_configuration(inst, config, amb, ep);
  write_evaluation(rep, out_file(o, "eval.json").string());
  std::printf("wcd: %s\n", format_double(rep.wcd).c_str());
  std::printf("wcs: %s\n", format_double(rep.wcs).c_str());
  std::printf("sim: %s\n", format_double(rep.sim).c_str());
  std::fprintf(stderr, "evaluated in %.3fs\n", rep.time_seconds);
  return kExitOk;
}

int cmd_compare(const Opts& o) {
  NetworkInstance inst = load_instance(o.instance);
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  CcgParams cp = ccg_params(o);
  EvaluationParams ep;
  ep.samples = o.samples;
  ep.seed = o.seed;
  ep.mode = o.method == "oracle" ? EvalMode::Oracle : EvalMode::Ccg;
  ep.draws_per_sample = o.draws;
  ep.solver = o.solver;

  CompareReport rep = compare(inst, amb, cp, ep);
  write_plan(inst, rep.dr_plan, out_file(o, "dr_plan.json").string());
  write_plan(inst, rep.ro_plan, out_file(o, "ro_plan.json").string());
  write_compare(rep, out_file(o, "compare.csv").string());
  print_plan_summary("dr ", rep.dr_plan);
  print_plan_summary("ro ", rep.ro_plan);
  std::printf("%s%% reduction in worst-case expected load shedding\n",
              format_double(rep.wcd_reduction_pct).c_str());
  std::printf("%s%% reduction in average load shedding\n",
              format_double(rep.sim_reduction_pct).c_str());

  if (o.dg_trials > 0) {
    std::ostringstream os;
    os << "model,criterion,value\n";
    for (PlanMode m : {PlanMode::DR, PlanMode::RO}) {
      DgValueReport dg = dg_value_study(inst, amb, m, o.dg_trials, o.seed, cp);
      const char* name = m == PlanMode::DR ? "dr" : "ro";
      os << name << ",optimal_shed," << format_double(dg.optimal_shed) << '\n';
      os << name << ",random_avg_shed," << format_double(dg.random_avg_shed)
         << '\n';
      for (int i = 0; i < dg.trials; ++i)
        os << name << ",random_shed_" << i << ','
           << format_double(dg.random_shed[i]) << '\n';
      std::printf("%s dg value: optimal %s vs random average %s\n", name,
                  format_double(dg.optimal_shed).c_str(),
                  format_double(dg.random_avg_shed).c_str());
    }
    std::ofstream f(out_file(o, "dg_value.csv"));
    f << os.str();
  }
  bool ok = rep.dr_plan.converged && rep.ro_plan.converged;
  return ok ? kExitOk : kExitNoConverge;
}

int cmd_sweep(const Opts& o) {
  NetworkInstance inst = load_instance(o.instance);
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  SweepReport rep = sweep(inst, amb, o.budgets, o.nz_values, ccg_params(o));
  write_sweep(rep, out_file(o, "sweep.csv").string());
  bool all_converged = true;
  for (const SweepPoint& pt : rep.points) {
    std::printf("B_y=%s N_z=%d shed=%s%s\n",
                format_double(pt.budget_cost).c_str(), pt.n_z,
                format_double(pt.shed).c_str(),
                pt.converged ? "" : " (not converged)");
    all_converged = all_converged && pt.converged;
  }
  for (const std::string& v : rep.violations)
    std::printf("monotonicity: %s\n", v.c_str());
  return all_converged ? kExitOk : kExitNoConverge;
}

int cmd_oracle(const Opts& o) {
  NetworkInstance inst = load_instance(o.instance);
  AmbiguitySet amb = AmbiguitySet::from_instance(inst);
  PlanMode mode = mode_of(o.mode);
  OracleLimits limits;
  limits.max_trees = o.max_trees;
  limits.max_scenarios = o.max_scenarios;
  ExactPlan best = exact_plan(inst, amb, mode, limits);
  std::printf("objective: %s\n", format_double(best.objective).c_str());
  std::printf("trees: %llu\n",
              static_cast<unsigned long long>(best.trees_examined));
  std::printf("configs: %llu\n",
              static_cast<unsigned long long>(best.configs_examined));
  if (mode == PlanMode::DR) {
    MomentLpSolution wc =
        exact_worst_case_expectation(inst, best.config, amb, o.max_scenarios);
    std::printf("worst-case distribution:\n");
    for (std::size_t j = 0; j < wc.support.size(); ++j)
      if (wc.psi[j] > 1e-12)
        std::printf("  %s %s\n", wc.support[j].key().c_str(),
                    format_double(wc.psi[j]).c_str());
  } else {
    auto [z, value] = exact_worst_case_scenario(inst, best.config,
                                                o.max_scenarios);
    std::printf("worst-case scenario: %s value %s\n", z.key().c_str(),
                format_double(value).c_str());
  }
  if (!o.plan_path.empty()) {
    std::ifstream in(o.plan_path);
    if (!in) throw ParseError("cannot open plan file: " + o.plan_path);
    nlohmann::json pj;
    in >> pj;
    double plan_obj = pj.at("objective").get<double>();
    std::printf("plan objective: %s\n", format_double(plan_obj).c_str());
    std::printf("plan minus oracle: %s\n",
                format_double(plan_obj - best.objective).c_str());
  }
  return kExitOk;
}

int cmd_generate(const Opts& o) {
  GenerateParams gp;
  gp.node_count = o.nodes;
  gp.substation_ids = o.subs;
  gp.dg_count = o.dg_count;
  gp.periods = o.periods;
  gp.seed = o.seed;
  gp.tie_lines = o.ties;
  gp.budget_cost = o.budget_cost;
  gp.n_z = o.gen_nz;
  NetworkInstance inst = generate_instance(gp);
  validate_or_throw(inst);
  fs::path path = out_file(o, "instance.json");
  save_instance(inst, path.string());
  std::printf("wrote %s (%zu nodes, %zu lines, %d periods)\n",
              path.string().c_str(), inst.nodes.size(), inst.lines.size(),
              inst.periods);
  return kExitOk;
}

void add_common(CLI::App* cmd, Opts& o, bool needs_instance) {
  auto* opt = cmd->add_option("--instance", o.instance, "instance JSON path");
  if (needs_instance) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--epsilon", o.epsilon, "relative gap tolerance");
  cmd->add_option("--mode", o.mode, "planning criterion")
      ->check(CLI::IsMember({"dr", "ro"}));
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--solver", o.solver, "LP/MILP backend name");
  cmd->add_option("--time-limit", o.time_limit,
                  "wall-clock budget in seconds, 0 = unlimited");
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  CLI::App app{
      "radial distribution network planning under uncertain line failures"};
  app.require_subcommand(1);

  CLI::App* plan = app.add_subcommand(
      "plan", "solve the planning problem, write plan.json and trace.csv");
  add_common(plan, o, true);
  plan->add_option("--max-iter", o.max_iter, "iteration cap");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score a saved plan: worst-case and sampled shedding");
  add_common(evaluate, o, true);
  evaluate->add_option("--plan", o.plan_path, "plan.json to evaluate")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--method", o.method, "inner evaluator")
      ->check(CLI::IsMember({"ccg", "oracle"}));
  evaluate->add_option("--samples", o.samples, "sampled distributions");
  evaluate->add_option("--draws", o.draws, "scenario draws per sample");
  evaluate->get_option("--epsilon")->default_val("1e-6");

  CLI::App* cmp = app.add_subcommand(
      "compare", "plan with both criteria and cross-evaluate the designs");
  add_common(cmp, o, true);
  cmp->add_option("--max-iter", o.max_iter, "iteration cap");
  cmp->add_option("--method", o.method, "inner evaluator")
      ->check(CLI::IsMember({"ccg", "oracle"}));
  cmp->add_option("--samples", o.samples, "sampled distributions");
  cmp->add_option("--draws", o.draws, "scenario draws per sample");
  cmp->add_option("--dg-trials", o.dg_trials,
                  "also run the DG placement value study with this many "
                  "random placements");

  CLI::App* sw = app.add_subcommand(
      "sweep", "re-plan over a budget and outage-count grid");
  add_common(sw, o, true);
  sw->add_option("--max-iter", o.max_iter, "iteration cap");
  sw->add_option("--budgets", o.budgets, "construction budget grid")
      ->required();
  sw->add_option("--nz", o.nz_values, "simultaneous outage cap grid")
      ->required();

  CLI::App* orc = app.add_subcommand(
      "oracle", "exact enumeration baseline (small instances only)");
  add_common(orc, o, true);
  orc->add_option("--max-trees", o.max_trees, "tree enumeration cap");
  orc->add_option("--max-scenarios", o.max_scenarios,
                  "scenario enumeration cap");
  orc->add_option("--plan", o.plan_path,
                  "plan.json to diff against the exact optimum")
      ->check(CLI::ExistingFile);

  CLI::App* gen = app.add_subcommand(
      "generate", "write a synthetic instance (33/69-bus shapes or random)");
  add_common(gen, o, false);
  gen->add_option("--nodes", o.nodes, "node count")->required();
  gen->add_option("--subs", o.subs, "substation node ids");
  gen->add_option("--dg", o.dg_count, "DG candidate count");
  gen->add_option("--periods", o.periods, "horizon length");
  gen->add_option("--ties", o.ties, "tie line count, -1 = topology default");
  gen->add_option("--budget-cost", o.budget_cost,
                  "construction budget, -1 = default");
  gen->add_option("--nz", o.gen_nz, "simultaneous outage cap, -1 = default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*plan) return cmd_plan(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*cmp) return cmd_compare(o);
    if (*sw) return cmd_sweep(o);
    if (*orc) return cmd_oracle(o);
    if (*gen) return cmd_generate(o);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "infeasible instance: %s\n", e.what());
    return kExitInfeasible;
  } catch (const MasterInfeasible& e) {
    std::fprintf(stderr, "infeasible instance: %s\n", e.what());
    return kExitInfeasible;
  } catch (const EnumerationError& e) {
    std::fprintf(stderr, "enumeration limit: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
