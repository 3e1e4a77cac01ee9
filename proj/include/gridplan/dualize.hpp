#pragma once

#include "gridplan/linear_model.hpp"

namespace gridplan {

// Exact LP dual. One dual variable per primal row, named "pi[<row>]"; one
// dual row per primal variable, named "dc[<var>]". Sign conventions for a
// min primal: <= rows give nonpositive duals, >= rows nonnegative, = rows
// free; a max primal mirrors them. Variables with bounds outside the
// canonical classes (>=0, <=0, free) get their finite bounds materialized as
// rows "lb[<var>]"/"ub[<var>]" first. Throws on integrality.
LinearModel dualize(const LinearModel& primal);

}  // namespace gridplan
