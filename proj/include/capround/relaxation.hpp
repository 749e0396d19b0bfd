#pragma once

#include <vector>

#include "capround/instance.hpp"
#include "capround/lp.hpp"

namespace capround {

// Optimal solution of the natural relaxation. x is facility-major:
// x[i * m + j] is the fraction of client j served by facility i.
struct FractionalSolution {
  int n = 0;
  int m = 0;
  std::vector<double> x;
  std::vector<double> y;
  double lp_opt = 0.0;
  double connection_cost = 0.0;
  double facility_cost = 0.0;

  double xij(int i, int j) const { return x[static_cast<size_t>(i) * m + j]; }
};

// Natural relaxation of the instance's problem: assignment rows, capacity
// rows sum_j x_ij <= u y_i, x_ij <= y_i, and the budget row (ckm) or
// cardinality row (ckflp). Facility costs enter the objective for cflp and
// ckflp. Variables are laid out as x (n*m, facility-major) then y (n).
LpModel build_natural_lp(const Instance& inst);

// Throws InfeasibleError when the relaxation has no feasible point.
FractionalSolution solve_natural_lp(const Instance& inst);

}  // namespace capround
