#pragma once

#include <string>

#include "gridplan/ccg.hpp"
#include "gridplan/evaluate.hpp"

namespace gridplan {

// Run-directory artifacts. Deterministic byte-for-byte given identical
// inputs, except the documented wall-clock fields.

void write_plan(const NetworkInstance& inst, const PlanResult& result,
                const std::string& path);
Configuration read_plan(const NetworkInstance& inst, const std::string& path);

// Table rows (scenario, affected lines, probability).
void write_wcd(const NetworkInstance& inst, const WorstCaseDistribution& wcd,
               const std::string& path);

// Columns iter,lb,ub,scenario,master_s,sub_s.
void write_trace(const PlanResult& result, const std::string& path);

// Columns model,criterion,value plus timing.
void write_compare(const CompareReport& report, const std::string& path);

// Columns budget_cost,n_z,shed_kw,gap,time_s.
void write_sweep(const SweepReport& report, const std::string& path);

void write_evaluation(const EvaluationReport& report, const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace gridplan
