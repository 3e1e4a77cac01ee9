#include "gridplan/dualize.hpp"

#include <stdexcept>

namespace gridplan {

namespace {

enum class VarClass { Ge0, Le0, Free };

}  // namespace

LinearModel dualize(const LinearModel& primal_in) {
  for (const auto& v : primal_in.vars())
    if (v.kind != VarKind::Continuous)
      throw std::invalid_argument("dualize: integrality on " + v.name);

  // Materialize non-canonical bounds as rows so every variable falls into
  // one of the three classes the sign table covers.
  LinearModel primal = primal_in;
  std::vector<VarClass> cls(primal.vars().size());
  for (std::size_t j = 0; j < primal.vars().size(); ++j) {
    const auto v = primal.vars()[j];  // copy; rows invalidate references
    const bool lb_canon = v.lb == 0.0 || v.lb == -kInf;
    const bool ub_canon = v.ub == 0.0 || v.ub == kInf;
    const bool canon =
        (v.lb == 0.0 && v.ub == kInf) || (v.lb == -kInf && v.ub == 0.0) ||
        (v.lb == -kInf && v.ub == kInf);
    if (canon) {
      cls[j] = v.lb == 0.0 ? VarClass::Ge0
                           : (v.ub == 0.0 ? VarClass::Le0 : VarClass::Free);
      continue;
    }
    int idx = static_cast<int>(j);
    if (v.lb != -kInf && !(v.lb == 0.0))
      primal.add_row("lb[" + v.name + "]", {{idx, 1.0}}, RowSense::Ge, v.lb);
    if (v.ub != kInf && !(v.ub == 0.0 && v.lb == -kInf))
      primal.add_row("ub[" + v.name + "]", {{idx, 1.0}}, RowSense::Le, v.ub);
    if (v.lb == 0.0)
      cls[j] = VarClass::Ge0;
    else if (v.ub == 0.0)
      cls[j] = VarClass::Le0;
    else
      cls[j] = VarClass::Free;
    primal.set_var_bounds(idx, cls[j] == VarClass::Ge0 ? 0.0 : -kInf,
                          cls[j] == VarClass::Le0 ? 0.0 : kInf);
  }

  const bool primal_min = primal.obj_sense() == ObjSense::Min;
  LinearModel dual;

  // One dual variable per primal row; sign from the table.
  for (const auto& r : primal.rows()) {
    double lb = -kInf, ub = kInf;
    if (r.sense == RowSense::Le) {
      if (primal_min) ub = 0.0; else lb = 0.0;
    } else if (r.sense == RowSense::Ge) {
      if (primal_min) lb = 0.0; else ub = 0.0;
    }
    dual.add_var("pi[" + r.name + "]", lb, ub);
  }

  // Column view of the primal matrix.
  std::vector<std::vector<LinTerm>> cols(primal.vars().size());
  for (std::size_t i = 0; i < primal.rows().size(); ++i)
    for (const auto& t : primal.rows()[i].terms)
      cols[t.var].push_back({static_cast<int>(i), t.coef});

  // One dual row per primal variable.
  for (std::size_t j = 0; j < primal.vars().size(); ++j) {
    RowSense sense;
    switch (cls[j]) {
      case VarClass::Ge0: sense = primal_min ? RowSense::Le : RowSense::Ge; break;
      case VarClass::Le0: sense = primal_min ? RowSense::Ge : RowSense::Le; break;
      default: sense = RowSense::Eq; break;
    }
    dual.add_row("dc[" + primal.vars()[j].name + "]", cols[j], sense,
                 primal.obj()[j]);
  }

  std::vector<LinTerm> dual_obj;
  for (std::size_t i = 0; i < primal.rows().size(); ++i)
    if (primal.rows()[i].rhs != 0.0)
      dual_obj.push_back({static_cast<int>(i), primal.rows()[i].rhs});
  dual.set_objective(primal_min ? ObjSense::Max : ObjSense::Min, dual_obj,
                     primal.obj_offset());
  return dual;
}

}  // namespace gridplan
