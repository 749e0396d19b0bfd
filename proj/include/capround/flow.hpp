#pragma once

#include <vector>

#include "capround/common.hpp"

namespace capround {

struct FlowArc {
  int from;
  int to;
  long capacity;
  double cost;
};

// Nodes with integer supplies (positive) and demands (negative) summing to
// zero; arcs with integer capacities and real costs.
class FlowNetwork {
 public:
  explicit FlowNetwork(int num_nodes) : supply_(num_nodes, 0) {}

  int num_nodes() const { return static_cast<int>(supply_.size()); }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int add_arc(int from, int to, long capacity, double cost);
  void set_supply(int node, long supply) { supply_[node] = supply; }
  long supply(int node) const { return supply_[node]; }
  const FlowArc& arc(int a) const { return arcs_[a]; }
  const std::vector<FlowArc>& arcs() const { return arcs_; }

 private:
  std::vector<long> supply_;
  std::vector<FlowArc> arcs_;
};

struct FlowResult {
  std::vector<long> flow;  // per arc
  double cost = 0.0;
};

// Successive shortest augmenting paths with node potentials. Throws
// InfeasibleError when the supplies cannot all be routed.
FlowResult min_cost_flow(const FlowNetwork& net);

// Min-cost assignment of unit-demand clients to facilities with integer
// capacities. assignment[j] is the facility serving client j.
struct AssignmentResult {
  std::vector<int> assignment;
  double cost = 0.0;
};
AssignmentResult min_cost_assignment(const std::vector<long>& capacity,
                                     int num_clients,
                                     const std::vector<double>& cost_matrix);

}  // namespace capround
