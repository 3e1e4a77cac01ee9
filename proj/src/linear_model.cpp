#include "gridplan/linear_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gridplan {

int LinearModel::add_var(const std::string& name, double lb, double ub,
                         VarKind kind) {
  if (var_by_name_.count(name))
    throw std::invalid_argument("duplicate variable name: " + name);
  if (lb > ub)
    throw std::invalid_argument("inverted bounds on " + name);
  if (kind == VarKind::Binary && (lb < 0.0 || ub > 1.0))
    throw std::invalid_argument("binary bounds outside [0,1] on " + name);
  int idx = static_cast<int>(vars_.size());
  vars_.push_back(Variable{name, lb, ub, kind});
  obj_.push_back(0.0);
  var_by_name_.emplace(name, idx);
  return idx;
}

int LinearModel::add_binary(const std::string& name) {
  return add_var(name, 0.0, 1.0, VarKind::Binary);
}

int LinearModel::add_row(const std::string& name, std::vector<LinTerm> terms,
                         RowSense sense, double rhs) {
  if (row_by_name_.count(name))
    throw std::invalid_argument("duplicate row name: " + name);
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
      throw std::invalid_argument("row " + name + " references unknown var");
  int idx = static_cast<int>(rows_.size());
  rows_.push_back(Constraint{name, std::move(terms), sense, rhs});
  row_by_name_.emplace(name, idx);
  return idx;
}

void LinearModel::set_objective(ObjSense sense, std::vector<LinTerm> terms,
                                double offset) {
  obj_sense_ = sense;
  obj_offset_ = offset;
  obj_.assign(vars_.size(), 0.0);
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
      throw std::invalid_argument("objective references unknown var");
    obj_[t.var] += t.coef;
  }
}

void LinearModel::add_obj_term(int var, double coef) {
  if (var < 0 || var >= static_cast<int>(vars_.size()))
    throw std::invalid_argument("objective references unknown var");
  obj_[var] += coef;
}

void LinearModel::set_var_bounds(int var, double lb, double ub) {
  if (lb > ub) throw std::invalid_argument("inverted bounds");
  vars_[var].lb = lb;
  vars_[var].ub = ub;
}

void LinearModel::set_rhs(int row, double rhs) { rows_[row].rhs = rhs; }

int LinearModel::var_index(const std::string& name) const {
  auto it = var_by_name_.find(name);
  return it == var_by_name_.end() ? -1 : it->second;
}

int LinearModel::row_index(const std::string& name) const {
  auto it = row_by_name_.find(name);
  return it == row_by_name_.end() ? -1 : it->second;
}

bool LinearModel::is_mip() const {
  for (const auto& v : vars_)
    if (v.kind == VarKind::Binary) return true;
  return false;
}

void LinearModel::check() const {
  for (const auto& v : vars_) {
    if (v.lb > v.ub) throw std::logic_error("inverted bounds on " + v.name);
    if (std::isnan(v.lb) || std::isnan(v.ub))
      throw std::logic_error("nan bound on " + v.name);
  }
  for (const auto& r : rows_) {
    if (std::isnan(r.rhs)) throw std::logic_error("nan rhs on " + r.name);
    for (const auto& t : r.terms) {
      if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
        throw std::logic_error("dangling term in " + r.name);
      if (std::isnan(t.coef) || std::isinf(t.coef))
        throw std::logic_error("bad coefficient in " + r.name);
    }
  }
}

std::string LinearModel::to_lp_format() const {
  std::ostringstream os;
  os.precision(17);
  os << (obj_sense_ == ObjSense::Min ? "Minimize" : "Maximize") << "\n obj:";
  for (std::size_t j = 0; j < vars_.size(); ++j)
    if (obj_[j] != 0.0)
      os << (obj_[j] >= 0 ? " +" : " ") << obj_[j] << " x" << j;
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    os << " c" << i << ":";
    for (const auto& t : rows_[i].terms)
      os << (t.coef >= 0 ? " +" : " ") << t.coef << " x" << t.var;
    switch (rows_[i].sense) {
      case RowSense::Le: os << " <= "; break;
      case RowSense::Eq: os << " = "; break;
      case RowSense::Ge: os << " >= "; break;
    }
    os << rows_[i].rhs << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    if (v.lb == -kInf && v.ub == kInf)
      os << " x" << j << " free\n";
    else if (v.lb == -kInf)
      os << " -inf <= x" << j << " <= " << v.ub << "\n";
    else if (v.ub == kInf)
      os << " " << v.lb << " <= x" << j << "\n";
    else
      os << " " << v.lb << " <= x" << j << " <= " << v.ub << "\n";
  }
  bool any_bin = false;
  for (std::size_t j = 0; j < vars_.size(); ++j)
    if (vars_[j].kind == VarKind::Binary) {
      if (!any_bin) { os << "Binaries\n"; any_bin = true; }
      os << " x" << j << "\n";
    }
  os << "End\n";
  return os.str();
}

double SolveResult::value(const LinearModel& m,
                          const std::string& var_name) const {
  int idx = m.var_index(var_name);
  if (idx < 0) throw std::invalid_argument("no variable " + var_name);
  return primal.at(idx);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Limit: return "limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

}  // namespace gridplan
