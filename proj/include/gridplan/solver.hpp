#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "gridplan/linear_model.hpp"

namespace gridplan {

struct SolveParams {
  double time_limit = kInf;   // seconds
  double mip_gap = 1e-6;      // relative
  int threads = 1;            // single thread keeps runs deterministic
  bool quiet = true;
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class Solver {
 public:
  virtual ~Solver() = default;
  virtual SolveResult solve(const LinearModel& model,
                            const SolveParams& params) = 0;
  virtual std::string name() const = 0;
};

// Backends by name; "highs" is the bundled one. Unknown names throw with the
// available list. Empty name consults GRIDPLAN_SOLVER, then the default.
std::unique_ptr<Solver> make_solver(const std::string& name = "");

// Convenience wrapper around the default backend.
SolveResult solve(const LinearModel& model, const SolveParams& params = {});

}  // namespace gridplan
