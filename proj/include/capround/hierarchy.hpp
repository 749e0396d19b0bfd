#pragma once

#include <string>
#include <vector>

#include "capround/checks.hpp"
#include "capround/clustering.hpp"
#include "capround/instance.hpp"

namespace capround {

// All node indices are cluster indices into ClusterSet::clusters.
struct CenterForest {
  std::vector<int> id;             // center client id, used for tie-breaking
  std::vector<int> eta;            // nearest other center; self for dense; -1 if none
  std::vector<int> tree_parent;    // parent before binarization, -1 at roots
  std::vector<std::pair<int, int>> removed_cycle_edges;
  std::vector<int> sigma;          // parent after binarization, -1 at roots
  std::vector<int> first_child;    // binarized children
  std::vector<int> next_child;
  std::vector<double> sigma_cost;  // c(j, σ(j)); roots use c(j, η(j)) or 0
  std::vector<double> weight;      // c(j, η(j)); monotone along σ
  std::vector<int> depth;
  std::vector<int> roots;
  // A sparse root with no other center at all.
  std::vector<bool> lone_sparse_root;

  int size() const { return static_cast<int>(eta.size()); }
  std::vector<int> children(int v) const;
};

CenterForest build_forest(const Instance& inst, const ClusterSet& cs);

struct MetaCluster {
  int root = -1;
  std::vector<int> members;        // inclusion order, root first
  int parent_mc = -1;
  std::vector<int> child_mcs;
  int connect_from = -1;           // root of this MC
  int connect_to = -1;             // σ(root) in the parent MC, or self
  double connect_weight = 0.0;
  double connect_cost = 0.0;
  int p = 0, q = 0, t = 0;
  int j_d = -1;                    // dense root, if any
  int j_s = -1;                    // first sparse member, if any
  std::vector<int> g1, g2;
  long gamma = 0;                  // openings required in g1
  long g2_requirement = 0;         // openings required in g2
  int q_prime = 0;
  double residual = 0.0;           // d/u - floor(d/u) of the dense root
  bool residual_case2 = false;
  long beta = 0;                   // openings guaranteed in the MC
  bool in_m1 = false;
  bool is_root() const { return parent_mc < 0; }
};

struct Hierarchy {
  CenterForest forest;
  std::vector<MetaCluster> mcs;    // creation order (parents before children)
  std::vector<int> mc_of;          // cluster index -> MC index
  int l = 2;
  double threshold = 1.0;          // residual split point between cases 1 and 2
};

std::vector<MetaCluster> form_meta_clusters(const CenterForest& forest, int l,
                                            std::vector<int>& mc_of);

// Residual threshold for case 2 is 4/(l-1), which keeps the capacity factor
// at 2 + 4/(l-1).
void partition_groups(MetaCluster& mc, const ClusterSet& cs,
                      const CenterForest& forest, int capacity, double threshold);

Hierarchy build_hierarchy(const Instance& inst, const ClusterSet& cs);

// T_j for every cluster: sparse clusters keep facilities within c(j, σ(j));
// dense clusters and lone sparse roots keep all of U(j).
std::vector<std::vector<int>> truncated_sets(const Instance& inst,
                                             const ClusterSet& cs,
                                             const CenterForest& forest);

void check_hierarchy(const Instance& inst, const ClusterSet& cs,
                     const Hierarchy& h, CheckLog& log);

std::string hierarchy_dot(const ClusterSet& cs, const Hierarchy& h);

}  // namespace capround
