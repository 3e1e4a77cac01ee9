#pragma once

#include <array>
#include <stdexcept>
#include <cstdint>
#include <string>
#include <vector>

namespace gridplan {

struct NodeSpec {
  int id = 0;
  std::vector<double> load_p;  // KW, one entry per period
  std::vector<double> load_q;  // KVar
  bool is_substation = false;
  double cap_p = 0.0;  // KW
  double cap_q = 0.0;  // KVar
  bool dg_candidate = false;
};

struct LineSpec {
  int from = 0;
  int to = 0;
  double cost = 0.0;        // construction cost
  double resistance = 0.0;  // ohm
  double reactance = 0.0;   // ohm
  double cap_p = 0.0;       // KW flow limit
  double cap_q = 0.0;       // KVar flow limit
  std::vector<double> mu_max;  // failure-probability bound per period
  int tau_rst = 0;             // minimum restoration time, periods
};

struct NetworkInstance {
  std::vector<NodeSpec> nodes;
  std::vector<LineSpec> lines;
  int periods = 1;
  double budget_cost = 0.0;  // B_y
  int budget_dg = 0;         // B_w
  int n_z = 0;               // max simultaneous outages per period
  double v_min = 0.95;
  double v_max = 1.05;
  double v_ref = 1.0;  // divisor in the voltage-drop equation
  std::vector<std::array<double, 2>> coords;  // optional, per node

  int node_index(int id) const;  // -1 if absent
  std::vector<int> substation_indices() const;
  std::vector<int> dg_candidate_indices() const;
  double total_load_p() const;  // sum over nodes and periods
};

// Base instance plus a synthetic root connected to every substation. Root
// edges are forced built and cost nothing.
struct AugmentedGraph {
  NetworkInstance base;
  int root_id = -1;
  std::vector<std::pair<int, int>> root_edges;  // (root_id, substation id)

  int node_count() const { return static_cast<int>(base.nodes.size()) + 1; }
  int edge_count() const {
    return static_cast<int>(base.lines.size() + root_edges.size());
  }
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Returns every violated invariant (empty means valid).
std::vector<std::string> validate(const NetworkInstance& inst);
void validate_or_throw(const NetworkInstance& inst);

NetworkInstance load_instance(const std::string& path);
void save_instance(const NetworkInstance& inst, const std::string& path);
std::string to_canonical_text(const NetworkInstance& inst);

AugmentedGraph augment(const NetworkInstance& inst);

// Min-cost spanning tree of the augmented graph (root edges forced, so this
// is Kruskal with all substations contracted into one component). Returns
// +inf when no spanning tree exists.
double min_tree_cost(const NetworkInstance& inst);

struct GenerateParams {
  int node_count = 0;
  std::vector<int> substation_ids;
  int dg_count = 0;
  int periods = 24;
  std::uint64_t seed = 0;
  int tie_lines = -1;       // -1: default for the topology
  double budget_cost = -1;  // -1: known-case default, else 1.25x min tree cost
  int n_z = -1;             // -1: known-case default, else 3
};

NetworkInstance generate_instance(const GenerateParams& params);

}  // namespace gridplan
