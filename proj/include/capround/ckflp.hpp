#pragma once

#include <vector>

#include "capround/cflp.hpp"
#include "capround/checks.hpp"
#include "capround/ckm.hpp"
#include "capround/hierarchy.hpp"

namespace capround {

// Checks (1 - ŷ_i) d_j c(j, σ(j)) <= 8 Π_j for every sparse center, with the
// per-pair and summed nearest-center forms recorded as diagnostics. The final
// inequality throws BoundViolation when it fails.
void verify_property_iv(const Instance& inst, const FractionalSolution& sol,
                        const ClusterSet& cs, const CenterForest& forest,
                        const SparseOpening& sparse, CheckLog& log);

// Feasible point for the cardinality opening LP: ŷ at the cheapest ball
// facility of each sparse cluster and the almost-integral z' on dense ones.
std::vector<double> ckflp_witness(const Instance& inst,
                                  const FractionalSolution& sol,
                                  const ClusterSet& cs, const Lp2State& state,
                                  CheckLog& log);

// (alpha(l) + 2) LP_opt + sum over dense clusters of (F̄_j + Π_j).
double ckflp_cost_envelope(const ClusterSet& cs, double lp_opt, int l);

RoundedSolution solve_ckflp(const Instance& inst, const SolveOptions& opt);

}  // namespace capround
