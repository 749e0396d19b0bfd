#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "capround/instance.hpp"
#include "capround/lp.hpp"

namespace capround {

inline constexpr int kOracleMaxFacilities = 16;

struct ExactResult {
  double cost = 0.0;              // includes facility costs for cflp/ckflp
  std::vector<int> open;
  std::vector<int> assignment;    // facility per client
  std::uint32_t mask = 0;
};

// Enumerates facility subsets in increasing bitmask order and solves the
// assignment of each by min-cost flow. Ties keep the smaller mask.
// Throws UsageError above kOracleMaxFacilities, InfeasibleError when no
// subset qualifies.
ExactResult exact_ckm(const Instance& inst);
ExactResult exact_cflp(const Instance& inst);
ExactResult exact_ckflp(const Instance& inst);
ExactResult exact_solve(const Instance& inst);

struct RationalLpResult {
  mpq_class objective;
  std::vector<mpq_class> x;       // per model variable
};

// Two-phase simplex with Bland's rule in exact rational arithmetic. Every
// double in the model is converted exactly. Throws LpInfeasible/LpUnbounded.
RationalLpResult rational_lp_resolve(const LpModel& model);

}  // namespace capround
