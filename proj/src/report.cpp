#include "gridplan/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"

namespace gridplan {

using ordered_json = nlohmann::ordered_json;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

const char* mode_name(PlanMode m) { return m == PlanMode::DR ? "dr" : "ro"; }

ordered_json json_matrix(const std::vector<std::vector<double>>& m) {
  ordered_json out = ordered_json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

void csv_row(std::ostringstream& os, const std::string& model,
             const std::string& criterion, double value) {
  os << model << ',' << criterion << ',' << format_double(value) << '\n';
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // collapse -0
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_plan(const NetworkInstance& inst, const PlanResult& result,
                const std::string& path) {
  ordered_json j;
  j["mode"] = mode_name(result.mode);
  j["converged"] = result.converged;
  j["objective"] = result.objective;
  j["lower_bound"] = result.lower_bound;
  j["gap"] = std::isfinite(result.gap) ? result.gap : -1.0;
  j["iterations"] = result.state.iteration;
  j["diagnostic"] = result.diagnostic;
  j["y"] = result.config.y;
  j["w"] = result.config.w;
  j["f_line"] = result.config.f_line;
  j["f_root"] = result.config.f_root;
  j["beta"] = json_matrix(result.beta);

  ordered_json built = ordered_json::array();
  for (std::size_t l = 0; l < result.config.y.size(); ++l)
    if (result.config.y[l])
      built.push_back({inst.lines[l].from, inst.lines[l].to});
  j["built_lines"] = built;

  ordered_json dg = ordered_json::array();
  for (std::size_t n = 0; n < result.config.w.size(); ++n)
    if (result.config.w[n]) dg.push_back(inst.nodes[n].id);
  j["dg_nodes"] = dg;

  j["time_build_s"] = result.build_seconds;
  j["time_solve_s"] = result.solve_seconds;
  write_text(path, j.dump(2) + "\n");
}

Configuration read_plan(const NetworkInstance& inst, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open plan file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("plan file is not valid JSON: ") + e.what());
  }
  Configuration config;
  try {
    config.y = j.at("y").get<std::vector<std::uint8_t>>();
    config.w = j.at("w").get<std::vector<std::uint8_t>>();
    config.f_line = j.at("f_line").get<std::vector<double>>();
    config.f_root = j.at("f_root").get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw ParseError(std::string("plan file is missing fields: ") + e.what());
  }
  if (config.y.size() != inst.lines.size() ||
      config.w.size() != inst.nodes.size() ||
      config.f_line.size() != inst.lines.size() ||
      config.f_root.size() != inst.substation_indices().size())
    throw ParseError("plan dimensions do not match the instance");
  return config;
}

void write_wcd(const NetworkInstance& inst, const WorstCaseDistribution& wcd,
               const std::string& path) {
  std::ostringstream os;
  os << "scenario,affected_lines,probability\n";
  for (std::size_t i = 0; i < wcd.support.size(); ++i) {
    if (wcd.probs[i] <= 1e-12) continue;
    const ContingencyScenario& z = wcd.support[i];
    std::set<int> down;
    for (int l = 0; l < z.lines; ++l)
      for (int t = 0; t < z.periods; ++t)
        if (!z.z(l, t)) down.insert(l);
    std::string lines;
    for (int l : down) {
      if (!lines.empty()) lines += ';';
      lines += std::to_string(inst.lines[l].from) + '-' +
               std::to_string(inst.lines[l].to);
    }
    os << z.key() << ',' << lines << ',' << format_double(wcd.probs[i])
       << '\n';
  }
  write_text(path, os.str());
}

void write_trace(const PlanResult& result, const std::string& path) {
  std::ostringstream os;
  os << "iter,lb,ub,scenario,master_s,sub_s\n";
  for (const IterationRecord& rec : result.state.history) {
    os << rec.iter << ',' << format_double(rec.lb) << ','
       << format_double(rec.ub) << ',' << rec.scenario << ','
       << format_double(rec.master_seconds) << ','
       << format_double(rec.sub_seconds) << '\n';
  }
  write_text(path, os.str());
}

void write_compare(const CompareReport& report, const std::string& path) {
  std::ostringstream os;
  os << "model,criterion,value\n";
  const struct {
    const char* model;
    const PlanResult* plan;
    const EvaluationReport* eval;
  } rows[] = {{"dr", &report.dr_plan, &report.dr_eval},
              {"ro", &report.ro_plan, &report.ro_eval}};
  for (const auto& r : rows) {
    csv_row(os, r.model, "objective", r.plan->objective);
    csv_row(os, r.model, "converged", r.plan->converged ? 1.0 : 0.0);
    csv_row(os, r.model, "iterations", r.plan->state.iteration);
    csv_row(os, r.model, "wcd", r.eval->wcd);
    csv_row(os, r.model, "wcs", r.eval->wcs);
    csv_row(os, r.model, "sim", r.eval->sim);
    // Model build time and solver time reported separately, never mixed.
    csv_row(os, r.model, "time_build_s", r.plan->build_seconds);
    csv_row(os, r.model, "time_solve_s", r.plan->solve_seconds);
    csv_row(os, r.model, "time_eval_s", r.eval->time_seconds);
  }
  csv_row(os, "reduction_pct", "wcd", report.wcd_reduction_pct);
  csv_row(os, "reduction_pct", "wcs", report.wcs_reduction_pct);
  csv_row(os, "reduction_pct", "sim", report.sim_reduction_pct);
  write_text(path, os.str());
}

void write_sweep(const SweepReport& report, const std::string& path) {
  std::ostringstream os;
  os << "budget_cost,n_z,shed_kw,gap,time_s\n";
  for (const SweepPoint& pt : report.points) {
    os << format_double(pt.budget_cost) << ',' << pt.n_z << ','
       << format_double(pt.shed) << ','
       << format_double(std::isfinite(pt.gap) ? pt.gap : -1.0) << ','
       << format_double(pt.time_seconds) << '\n';
  }
  write_text(path, os.str());
}

void write_evaluation(const EvaluationReport& report, const std::string& path) {
  ordered_json j;
  j["wcd"] = report.wcd;
  j["wcs"] = report.wcs;
  j["sim"] = report.sim;
  j["sample_count"] = report.sample_count;
  j["seed"] = report.seed;
  j["time_s"] = report.time_seconds;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace gridplan
