#pragma once

#include <vector>

#include "capround/checks.hpp"
#include "capround/ckm.hpp"
#include "capround/clustering.hpp"
#include "capround/instance.hpp"
#include "capround/relaxation.hpp"

namespace capround {

// Sparse clusters served by one facility each: the cheapest facility of the
// ball, opened to `opening[k]` (1 for cflp, min(y*(U(j)), 1) for ckflp).
struct SparseOpening {
  std::vector<int> facility;      // per cluster; -1 for dense clusters
  std::vector<double> opening;    // per cluster
  std::vector<double> y;          // per facility
  std::vector<double> x;          // facility-major, sparse clusters only
};

// `cap_at_mass` selects the ckflp opening min(y*(U(j)), 1) instead of 1.
// Records the per-cluster facility and service inequalities in `log`.
SparseOpening sparse_open_cheapest(const Instance& inst,
                                   const FractionalSolution& sol,
                                   const ClusterSet& cs, bool cap_at_mass,
                                   CheckLog& log);

// z_i = l_i / u over U(j), aligned with cs.clusters[k].facilities.
std::vector<double> cluster_lp_feasible(const Instance& inst,
                                        const FractionalSolution& sol,
                                        const ClusterSet& cs, int k,
                                        CheckLog& log);

// Cluster-instance objective sum (f_i + u c(i, j)) z_i.
double cluster_cost(const Instance& inst, const Cluster& c,
                    const std::vector<double>& z);

// Greedy repacking of the total mass onto the positive entries of z in
// order of f_i + u c(i, j), ties by id. At most one entry stays fractional.
std::vector<double> make_almost_integral(const Instance& inst, const Cluster& c,
                                         const std::vector<double>& z,
                                         CheckLog& log);

struct DenseIntegral {
  std::vector<double> z;     // 0/1, aligned with the cluster's facilities
  std::vector<double> load;
};

// Closes a fractional facility below eps (its load moves to the first open
// facility in greedy order) or opens it fully otherwise.
DenseIntegral make_integral_dense(const Instance& inst, const Cluster& c,
                                  const std::vector<double>& zprime, double eps,
                                  CheckLog& log);

// Cost factor of the cflp pipeline against the relaxation: 20 + 6/eps.
inline double cflp_cost_factor(double eps) { return 20.0 + 6.0 / eps; }

RoundedSolution solve_cflp(const Instance& inst, const SolveOptions& opt);

}  // namespace capround
