#pragma once

#include <string>
#include <utility>
#include <vector>

#include "capround/checks.hpp"
#include "capround/clustering.hpp"
#include "capround/hierarchy.hpp"
#include "capround/instance.hpp"
#include "capround/lp.hpp"
#include "capround/relaxation.hpp"

namespace capround {

enum class AssignMode { kFractional, kIntegral };
enum class OpenMode { kBoth, kLarger };

// One group constraint: at least `requirement` openings over the truncated
// sets of `clusters`.
struct Lp2Group {
  int mc = -1;
  bool first_part = false;  // G¹ (true) or G² (false)
  std::vector<int> clusters;
  long requirement = 0;
};

// Opening LP over the truncated sets. Sparse clusters take at most one
// opening, dense clusters at least floor(d/u), groups their requirement, and
// either a budget or a cardinality row caps the total.
struct Lp2State {
  int num_facilities = 0;
  std::vector<std::vector<int>> T;
  std::vector<int> owner;               // facility -> cluster whose T holds it, or -1
  std::vector<bool> sparse;             // per cluster
  std::vector<long> dense_floor;        // per cluster (0 for sparse)
  std::vector<Lp2Group> groups;
  std::vector<int> group_of_cluster;    // per cluster
  std::vector<double> coef;             // per facility objective coefficient
  double constant = 0.0;
  std::vector<double> fcost;
  bool has_budget = false;
  double budget = 0.0;
  bool has_cardinality = false;
  long cardinality = 0;

  double cost(const std::vector<double>& w) const;
  // The opening LP with every eligible facility free in [0, 1]. Variable v
  // corresponds to facility eligible_facilities()[v].
  LpModel full_model() const;
  std::vector<int> eligible_facilities() const;
};

// `with_facility_costs` adds sum f_i w_i to the objective.
Lp2State build_lp2(const Instance& inst, const ClusterSet& cs,
                   const Hierarchy& h, const std::vector<std::vector<int>>& T,
                   bool with_facility_costs);

// Feasible point for the opening LP built from the relaxation: load/u on
// dense truncated sets, x*_ij of the center on sparse truncated sets.
std::vector<double> lp2_witness(const Instance& inst,
                                const FractionalSolution& sol,
                                const ClusterSet& cs, const Lp2State& state);

// Violation of the opening LP's constraints at w (0 when feasible).
double lp2_violation(const Lp2State& state, const std::vector<double>& w);

struct IterationRecord {
  int active = 0;
  int fractional = 0;
  int fixed_zero = 0;
  int fixed_one = 0;
  int retired = 0;
  double cost = 0.0;
};

struct PseudoIntegral {
  std::vector<double> w;         // per facility
  std::vector<int> opened;       // fixed at one, in fixing order
  std::vector<int> fractional;   // increasing ids
  std::vector<IterationRecord> history;
  double cost = 0.0;
};

// Repeatedly solves the residual opening LP at an extreme point, drops zero
// variables, fixes ones, and retires clusters whose own row is tight from
// their group. Stops when no variable is integral or none remain.
PseudoIntegral iterative_round(const Lp2State& state, CheckLog& log);

// Integral opening from a pseudo-integral point. kBoth opens every
// fractional facility (their values must sum to one); kLarger opens only the
// largest, ties to the smaller id.
std::vector<bool> open_integral(const PseudoIntegral& p, OpenMode mode,
                                CheckLog& log);

struct RoutedDemand {
  // served[k]: (facility, amount) pairs carrying cluster k's demand.
  std::vector<std::vector<std::pair<int, double>>> served;
  std::vector<double> g;                       // per facility
  std::vector<std::vector<std::pair<int, double>>> theta;  // (cluster, fraction)
  std::vector<double> spill;                   // per MC, sent to the parent
  std::vector<int> facility_less;              // per MC count
};

RoutedDemand route_demands(const Instance& inst, const ClusterSet& cs,
                           const Hierarchy& h, const std::vector<bool>& open,
                           double capacity_factor_bound, CheckLog& log);

struct AssignmentCosts {
  double consolidation = 0.0;   // clients to their cluster centers
  double travel = 0.0;          // centers to serving centers
  double delivery = 0.0;        // serving centers to facilities
  double total = 0.0;           // actual sum of c(i, j') x̄_ij'
};

// x̄_ij' = sum_k served(k, i) / d_k * x*(j', U(k)), facility-major.
std::vector<double> assign_clients(const Instance& inst,
                                   const FractionalSolution& sol,
                                   const ClusterSet& cs,
                                   const RoutedDemand& routed,
                                   AssignmentCosts& costs);

// Min-cost flow rounding of a fractional assignment with facility
// capacities ceil(load). Returns facility per client.
std::vector<int> integralize_assignment(const Instance& inst,
                                        const std::vector<double>& xbar,
                                        const std::vector<bool>& open,
                                        double& integral_cost);

struct GuessRecord {
  double fmax = 0.0;
  std::string status;   // "ok", "skipped", or an error message
  double cost = 0.0;
};

struct MetaClusterSummary {
  int root_center = -1;
  int size = 0;
  long gamma = 0;
  long g2_requirement = 0;
  long beta = 0;
  bool residual_case2 = false;
  int opened = 0;
  int facility_less = 0;
};

struct RoundedSolution {
  Problem problem = Problem::kCkm;
  double eps = 1.0;
  int l = 2;
  AssignMode assign = AssignMode::kFractional;
  int n = 0, m = 0, capacity = 1;
  double budget_or_k = 0.0;

  std::vector<int> open;              // facility ids
  std::vector<double> xbar;           // facility-major
  std::vector<int> integral;          // facility per client when integral
  double connection_cost = 0.0;       // fractional assignment
  double integral_connection_cost = 0.0;
  double facility_cost = 0.0;
  double cost = 0.0;                  // reported objective
  double budget_used = 0.0;
  double fmax = 0.0;
  int cardinality_used = 0;
  double max_load_over_u = 0.0;
  long max_integral_load = 0;
  int frac_after_round = 0;
  double lp_opt = 0.0;
  double alpha = 0.0;
  double cost_bound = 0.0;
  double witness_cost = 0.0;
  bool ok_budget = false;
  bool ok_capacity = false;
  bool ok_cost = false;

  int num_centers = 0;
  std::vector<MetaClusterSummary> mcs;
  std::vector<IterationRecord> iterations;
  std::vector<GuessRecord> guesses;
  CheckLog checks;

  bool verdict() const {
    return ok_budget && ok_capacity && ok_cost && checks.all_bounds_hold();
  }
};

struct SolveOptions {
  double eps = 1.0;
  AssignMode assign = AssignMode::kFractional;
};

// One pass of the meta-cluster pipeline on `inst` (already restricted for
// ckm guesses). Shared by ckm and ckflp.
struct MetaRun {
  FractionalSolution sol;
  ClusterSet cs;
  Hierarchy h;
  std::vector<std::vector<int>> T;
  Lp2State lp2;
  std::vector<double> witness;
  double witness_cost = 0.0;
  PseudoIntegral rounded;
  std::vector<bool> open;
  RoutedDemand routed;
  std::vector<double> xbar;
  AssignmentCosts costs;
  CheckLog checks;
};

// Clustering, hierarchy, opening LP, iterative rounding, opening, routing
// and fractional assignment on `inst` with the given relaxation solution.
MetaRun run_meta_pipeline(const Instance& inst, FractionalSolution sol, int l,
                          OpenMode mode, bool facility_costs);

// Checks every inequality of the meta-cluster pipeline that is phrased
// against lp_opt, after routing and assignment.
void check_meta_costs(const Instance& inst, MetaRun& run, int l);

// Weighted sparse cost sum_k d_k (sum_{U(k)} c x*_ik + c(k,σ(k))(1 - x*(U(k), k))).
double sparse_sigma_cost(const Instance& inst, const FractionalSolution& sol,
                         const ClusterSet& cs, const CenterForest& forest);

std::vector<MetaClusterSummary> summarize_mcs(const ClusterSet& cs,
                                              const Hierarchy& h,
                                              const std::vector<bool>& open,
                                              const RoutedDemand& routed);

RoundedSolution solve_ckm(const Instance& inst, const SolveOptions& opt);

}  // namespace capround
