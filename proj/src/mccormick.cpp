#include "gridplan/mccormick.hpp"

#include <stdexcept>

namespace gridplan {

int mccormick_binary(LinearModel& m, int pi_var, int zbit_var) {
  const auto& pi = m.vars().at(pi_var);
  const auto& zb = m.vars().at(zbit_var);
  if (pi.lb == -kInf)
    throw std::invalid_argument("mccormick: unbounded dual " + pi.name);
  if (pi.ub != 0.0)
    throw std::invalid_argument("mccormick: upper bound of " + pi.name +
                                " must be 0");
  if (zb.kind != VarKind::Binary)
    throw std::invalid_argument("mccormick: " + zb.name + " not binary");
  const double L = pi.lb;
  const std::string wname = "w[" + pi.name + "*" + zb.name + "]";
  int w = m.add_var(wname, L, 0.0);
  // w >= L z ; w <= pi - L (1 - z) ; w >= pi ; w <= 0 is the bound above
  m.add_row("mc1[" + wname + "]", {{w, 1.0}, {zbit_var, -L}}, RowSense::Ge,
            0.0);
  m.add_row("mc2[" + wname + "]", {{w, 1.0}, {pi_var, -1.0}, {zbit_var, -L}},
            RowSense::Le, -L);
  m.add_row("mc3[" + wname + "]", {{w, 1.0}, {pi_var, -1.0}}, RowSense::Ge,
            0.0);
  return w;
}

}  // namespace gridplan
