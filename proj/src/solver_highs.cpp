#include <chrono>
#include <cstdlib>
#include <mutex>

#include "Highs.h"
#include "gridplan/solver.hpp"

namespace gridplan {

namespace {

HighsLp to_highs(const LinearModel& m) {
  HighsLp lp;
  const auto& vars = m.vars();
  const auto& rows = m.rows();
  lp.num_col_ = static_cast<HighsInt>(vars.size());
  lp.num_row_ = static_cast<HighsInt>(rows.size());
  lp.sense_ = m.obj_sense() == ObjSense::Min ? ::ObjSense::kMinimize
                                             : ::ObjSense::kMaximize;
  lp.offset_ = m.obj_offset();
  lp.col_cost_ = m.obj();
  lp.col_lower_.reserve(vars.size());
  lp.col_upper_.reserve(vars.size());
  bool mip = false;
  for (const auto& v : vars) {
    lp.col_lower_.push_back(v.lb);
    lp.col_upper_.push_back(v.ub);
    if (v.kind == VarKind::Binary) mip = true;
  }
  if (mip) {
    lp.integrality_.reserve(vars.size());
    for (const auto& v : vars)
      lp.integrality_.push_back(v.kind == VarKind::Binary
                                    ? HighsVarType::kInteger
                                    : HighsVarType::kContinuous);
  }
  lp.row_lower_.reserve(rows.size());
  lp.row_upper_.reserve(rows.size());
  lp.a_matrix_.format_ = MatrixFormat::kRowwise;
  lp.a_matrix_.start_.clear();
  lp.a_matrix_.start_.push_back(0);
  for (const auto& r : rows) {
    switch (r.sense) {
      case RowSense::Le:
        lp.row_lower_.push_back(-kInf);
        lp.row_upper_.push_back(r.rhs);
        break;
      case RowSense::Eq:
        lp.row_lower_.push_back(r.rhs);
        lp.row_upper_.push_back(r.rhs);
        break;
      case RowSense::Ge:
        lp.row_lower_.push_back(r.rhs);
        lp.row_upper_.push_back(kInf);
        break;
    }
    for (const auto& t : r.terms) {
      lp.a_matrix_.index_.push_back(t.var);
      lp.a_matrix_.value_.push_back(t.coef);
    }
    lp.a_matrix_.start_.push_back(
        static_cast<HighsInt>(lp.a_matrix_.index_.size()));
  }
  return lp;
}

class HighsSolver final : public Solver {
 public:
  SolveResult solve(const LinearModel& model,
                    const SolveParams& params) override {
    model.check();
    SolveResult out;
    if (model.vars().empty()) {
      out.status = SolveStatus::Optimal;
      out.objective = model.obj_offset();
      out.dual_bound = out.objective;
      out.dual.assign(model.rows().size(), 0.0);
      return out;
    }
    auto t0 = std::chrono::steady_clock::now();
    Highs highs;
    highs.setOptionValue("output_flag", !params.quiet);
    highs.setOptionValue("threads", params.threads);
    highs.setOptionValue("parallel", params.threads > 1 ? "on" : "off");
    highs.setOptionValue("random_seed", 0);
    if (params.time_limit < kInf)
      highs.setOptionValue("time_limit", params.time_limit);
    if (model.is_mip())
      highs.setOptionValue("mip_rel_gap", params.mip_gap);
    // The HiGHS 1.9 presolve aggregator rule can certify a wrong MIP optimum
    // on masters whose cut rows mix unit and 1e6 penalty coefficients (a
    // pinned restriction then beats the "optimum"). Disabling every rule in
    // turn isolated the aggregator; masking just that bit keeps the rest of
    // presolve, which these models need to stay tractable.
    highs.setOptionValue("presolve_rule_off", 1 << kPresolveRuleAggregator);

    HighsLp lp = to_highs(model);
    if (highs.passModel(lp) != HighsStatus::kOk)
      throw SolverError("highs rejected the model");
    HighsStatus rc = highs.run();
    if (rc == HighsStatus::kError) throw SolverError("highs run failed");

    HighsModelStatus ms = highs.getModelStatus();
    if (ms == HighsModelStatus::kUnboundedOrInfeasible) {
      // presolve cannot tell them apart (and sometimes raises this on a
      // feasible bounded model); a clean solve settles it. Forcing simplex
      // on a MIP would quietly swap in the LP relaxation, so only LPs get
      // the algorithm pin.
      highs.setOptionValue("presolve", "off");
      if (!model.is_mip()) highs.setOptionValue("solver", "simplex");
      if (highs.run() == HighsStatus::kError)
        throw SolverError("highs run failed");
      ms = highs.getModelStatus();
    }

    const bool is_mip = model.is_mip();
    const auto& info = highs.getInfo();
    const auto& sol = highs.getSolution();
    switch (ms) {
      case HighsModelStatus::kOptimal:
        out.status = SolveStatus::Optimal;
        break;
      case HighsModelStatus::kInfeasible:
        out.status = SolveStatus::Infeasible;
        break;
      case HighsModelStatus::kUnbounded:
        out.status = SolveStatus::Unbounded;
        break;
      case HighsModelStatus::kModelEmpty:
        out.status = SolveStatus::Optimal;
        break;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
        out.status = SolveStatus::Limit;
        break;
      default:
        out.status = SolveStatus::Error;
        break;
    }
    out.objective = info.objective_function_value;
    out.dual_bound = is_mip ? info.mip_dual_bound : out.objective;
    out.mip_gap = is_mip ? info.mip_gap : 0.0;
    if (sol.value_valid) out.primal = sol.col_value;
    if (!is_mip && sol.dual_valid) out.dual = sol.row_dual;
    if (out.status == SolveStatus::Optimal && out.primal.empty() &&
        !model.vars().empty())
      out.status = SolveStatus::Error;
    out.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
  }

  std::string name() const override { return "highs"; }
};

}  // namespace

std::unique_ptr<Solver> make_solver(const std::string& name) {
  std::string pick = name;
  if (pick.empty()) {
    const char* env = std::getenv("GRIDPLAN_SOLVER");
    pick = env && *env ? env : "highs";
  }
  if (pick == "highs") return std::make_unique<HighsSolver>();
  throw SolverError("unknown solver '" + pick + "' (available: highs)");
}

SolveResult solve(const LinearModel& model, const SolveParams& params) {
  return make_solver()->solve(model, params);
}

}  // namespace gridplan
