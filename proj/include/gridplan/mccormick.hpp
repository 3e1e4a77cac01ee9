#pragma once

#include "gridplan/linear_model.hpp"

namespace gridplan {

// Adds w = pi * zbit for pi in [L, 0] and zbit binary, exact at integral
// zbit: w >= L*zbit; w <= 0; w <= pi - L*(1 - zbit); w >= pi. Returns the
// index of w, named "w[<pi>*<z>]". Throws when pi's lower bound is not
// finite or its upper bound is not 0.
int mccormick_binary(LinearModel& m, int pi_var, int zbit_var);

}  // namespace gridplan
