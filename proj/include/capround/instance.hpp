#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "capround/common.hpp"

namespace capround {

// Facility/client instance over a finite metric. Points are numbered with
// facilities first (0..n-1) and clients after (n..n+m-1); the accessors below
// take facility and client ids in their own ranges.
class Instance {
 public:
  static Instance from_coordinates(Problem problem,
                                   std::vector<double> facility_cost,
                                   int num_clients, int capacity, int dim,
                                   std::vector<double> coords);
  static Instance from_matrix(Problem problem, std::vector<double> facility_cost,
                              int num_clients, int capacity,
                              std::vector<double> matrix);

  Problem problem() const { return problem_; }
  int num_facilities() const { return static_cast<int>(cost_.size()); }
  int num_clients() const { return num_clients_; }
  int num_points() const { return num_facilities() + num_clients_; }
  int capacity() const { return capacity_; }
  double facility_cost(int i) const { return cost_[i]; }
  const std::vector<double>& facility_costs() const { return cost_; }

  double budget() const { return budget_; }
  int k() const { return k_; }
  Instance& set_budget(double b);
  Instance& set_k(int k);
  Instance& set_problem(Problem p) {
    problem_ = p;
    return *this;
  }

  double point_dist(int a, int b) const { return dist_[a * num_points() + b]; }
  double fc(int i, int j) const { return point_dist(i, num_facilities() + j); }
  double cc(int j1, int j2) const {
    return point_dist(num_facilities() + j1, num_facilities() + j2);
  }

  bool has_coordinates() const { return dim_ > 0; }
  int dim() const { return dim_; }
  const std::vector<double>& coordinates() const { return coords_; }

  // Instance on the facilities listed in `keep` (increasing original ids);
  // clients and all other parameters are unchanged.
  Instance restrict_facilities(const std::vector<int>& keep) const;

  // Checks symmetry, zero diagonal, non-negativity and the triangle
  // inequality (exhaustive up to 200 points, 10*n^2 sampled triples above).
  void validate() const;

 private:
  Instance() = default;
  void compute_euclidean();

  Problem problem_ = Problem::kCkm;
  std::vector<double> cost_;
  int num_clients_ = 0;
  int capacity_ = 1;
  double budget_ = 0.0;
  int k_ = 0;
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> dist_;
};

// kClustered draws points around a few blob centers in the plane, which
// gives instances with many well-separated cluster centers.
enum class Family { kEuclidean, kUniformMatrix, kClustered };

struct GenParams {
  Family family = Family::kEuclidean;
  Problem problem = Problem::kCkm;
  int n_facilities = 8;
  int n_clients = 15;
  double coord_range = 100.0;
  int cost_min = 1;
  int cost_max = 20;
  int capacity = 3;
  // Budget: fixed value, or the cheapest facility set that covers all demand.
  bool budget_opt_feasible = true;
  double budget = 0.0;
  // Multiplies the covering budget (result rounded down).
  double budget_scale = 1.0;
  // kClustered: blob count (0 selects max(2, n_facilities / 2)) and the blob
  // side length as a fraction of coord_range.
  int blobs = 0;
  double blob_spread = 0.05;
  // Cardinality for ckflp; 0 selects ceil(n_clients / capacity).
  int k = 0;
  std::uint64_t seed = 1;
};

Instance generate(const GenParams& params);

/// Budget that buys the cheapest ceil(n/u) facilities (greedy by cost).
double opt_feasible_budget(const std::vector<double>& cost, int n_clients,
                           int capacity);

Instance load_instance(const std::string& path);
Instance parse_instance(std::istream& in);
void save_instance(const Instance& inst, std::ostream& out);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace capround
