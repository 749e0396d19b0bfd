#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "capround/common.hpp"

namespace capround {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLe, kGe, kEq };

struct LpTerm {
  int var;
  double coef;
};

struct LpRow {
  std::vector<LpTerm> terms;
  Sense sense;
  double rhs;
  std::string name;
};

struct LpVariable {
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
  std::string name;
};

// Minimization model with bounded variables and linear rows.
class LpModel {
 public:
  int add_variable(double lower, double upper, double cost,
                   std::string name = {});
  int add_row(std::vector<LpTerm> terms, Sense sense, double rhs,
              std::string name = {});

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const LpVariable& var(int v) const { return vars_[v]; }
  const LpRow& row(int r) const { return rows_[r]; }
  const std::vector<LpVariable>& vars() const { return vars_; }
  const std::vector<LpRow>& rows() const { return rows_; }

  double objective_value(const std::vector<double>& x) const;
  double row_activity(int r, const std::vector<double>& x) const;

  // CPLEX LP text, for cross-checking with external solvers.
  std::string to_lp_format() const;

 private:
  std::vector<LpVariable> vars_;
  std::vector<LpRow> rows_;
};

enum class VarStatus { kBasic, kAtLower, kAtUpper };

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  std::vector<VarStatus> status;  // per structural variable
  std::vector<bool> tight;        // per row
  int iterations = 0;
};

class LpInfeasible : public Error {
 public:
  using Error::Error;
};
class LpUnbounded : public Error {
 public:
  using Error::Error;
};
class LpNumericFailure : public Error {
 public:
  using Error::Error;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Zero means 50*(m+n) + 1000.
  int max_iterations = 0;
};

// Bounded-variable primal simplex (dense tableau, two phases). Returns an
// optimal basic feasible solution; values within 1e-9 of a bound are snapped
// to it. Switches to Bland's rule after 5*(m+n) consecutive degenerate pivots.
LpSolution solve_extreme(const LpModel& model, const SimplexOptions& opt = {});

// Test mode: every later solve_extreme on at most 500 variables re-checks the
// rank condition exactly and throws LpNumericFailure when it fails.
void set_extreme_point_verification(bool on);
long extreme_point_verifications();

// Rank, in exact rational arithmetic, of the constraints active at `x`:
// tight rows, equality rows, and variables sitting at a bound.
int exact_active_rank(const LpModel& model, const std::vector<double>& x,
                      double tol = kTightTol);

// True when the active constraints at `x` have full column rank.
bool is_extreme_point(const LpModel& model, const std::vector<double>& x,
                      double tol = kTightTol);

}  // namespace capround
