#pragma once

#include <string>
#include <vector>

#include "capround/checks.hpp"
#include "capround/instance.hpp"
#include "capround/relaxation.hpp"

namespace capround {

enum class ClusterKind { kSparse, kDense };

struct Cluster {
  int center = -1;          // client id
  double avg_cost = 0.0;    // C̄ of the center
  double radius = 0.0;      // l * C̄
  std::vector<int> ball;    // facilities within the radius, increasing ids
  std::vector<int> facilities;  // U(j), increasing ids
  double demand = 0.0;      // consolidated demand d_j
  ClusterKind kind = ClusterKind::kSparse;
  double fbar = 0.0;        // sum over U(j) of y*_i f_i
  double pi = 0.0;          // sum over U(j), all clients of x*(c + 2l C̄)

  bool dense() const { return kind == ClusterKind::kDense; }
};

struct ClusterSet {
  int l = 2;
  std::vector<double> avg_cost;     // per client
  std::vector<int> centers;         // client ids, selection order
  std::vector<int> ctr;             // per client: center client id
  std::vector<int> cluster_of_client_center;  // client id -> cluster index or -1
  std::vector<Cluster> clusters;    // parallel to centers
  std::vector<int> cluster_of_facility;
  std::vector<double> load;         // l_i = sum_j x*_ij

  int num_clusters() const { return static_cast<int>(clusters.size()); }
};

std::vector<double> avg_costs(const Instance& inst, const FractionalSolution& sol);

// Greedy filtering: smallest radius first (ties by client id); a new center
// absorbs every remaining client j' with c(j, j') <= 2l C̄_j'.
ClusterSet select_centers(const Instance& inst, const FractionalSolution& sol,
                          int l);

// Fills balls, clusters, loads, demands, labels and the F̄/Π budgets.
void build_clusters(const Instance& inst, const FractionalSolution& sol,
                    ClusterSet& cs);

ClusterSet make_clusters(const Instance& inst, const FractionalSolution& sol,
                         int l);

// x*(j', U(j)) for every client j' and cluster index k, client-major.
std::vector<double> cluster_assignment_mass(const Instance& inst,
                                            const FractionalSolution& sol,
                                            const ClusterSet& cs);

// Partition, separation, ball mass, demand total, and the distance and cost
// inequalities satisfied by any filtered clustering.
// Bounds are taken against the relaxation's connection cost.
void check_clustering(const Instance& inst, const FractionalSolution& sol,
                      const ClusterSet& cs, CheckLog& log);

// center,radius,demand,label rows.
std::string clusters_csv(const ClusterSet& cs);

}  // namespace capround
