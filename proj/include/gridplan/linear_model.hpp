#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridplan {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class RowSense { Le, Eq, Ge };
enum class ObjSense { Min, Max };

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  VarKind kind = VarKind::Continuous;
};

struct LinTerm {
  int var = -1;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinTerm> terms;
  RowSense sense = RowSense::Le;
  double rhs = 0.0;
};

// Names are structured strings like "p[3,7,12]"; duals and the z-coefficient
// extraction key on them, so they are part of the public contract.
class LinearModel {
 public:
  int add_var(const std::string& name, double lb, double ub,
              VarKind kind = VarKind::Continuous);
  int add_binary(const std::string& name);
  int add_row(const std::string& name, std::vector<LinTerm> terms,
              RowSense sense, double rhs);

  void set_objective(ObjSense sense, std::vector<LinTerm> terms,
                     double offset = 0.0);
  void add_obj_term(int var, double coef);
  void set_var_bounds(int var, double lb, double ub);
  void set_rhs(int row, double rhs);

  int var_index(const std::string& name) const;  // -1 if absent
  int row_index(const std::string& name) const;

  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Constraint>& rows() const { return rows_; }
  ObjSense obj_sense() const { return obj_sense_; }
  const std::vector<double>& obj() const { return obj_; }  // dense, per var
  double obj_offset() const { return obj_offset_; }
  bool is_mip() const;

  // Throws on dangling term indices, bound inversions, duplicate names.
  void check() const;

  std::string to_lp_format() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  double obj_offset_ = 0.0;
  ObjSense obj_sense_ = ObjSense::Min;
  std::unordered_map<std::string, int> var_by_name_;
  std::unordered_map<std::string, int> row_by_name_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit, Error };

struct SolveResult {
  SolveStatus status = SolveStatus::Error;
  double objective = 0.0;
  std::vector<double> primal;  // per variable
  std::vector<double> dual;    // per row, LPs only
  double solve_seconds = 0.0;
  double mip_gap = 0.0;
  double dual_bound = 0.0;  // MIP bound; equals objective for LPs

  double value(const LinearModel& m, const std::string& var_name) const;
  bool has_duals() const { return !dual.empty(); }
};

const char* to_string(SolveStatus s);

}  // namespace gridplan
