#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace capround {

/// Absolute tolerance for comparisons against stated bounds.
inline constexpr double kBoundTol = 1e-9;
/// Values this close to 0 or 1 are classified as integral.
inline constexpr double kSnapTol = 1e-9;
/// Tolerance for "is this LP constraint tight".
inline constexpr double kTightTol = 1e-7;

enum class Problem { kCkm, kCflp, kCkflp };

std::string to_string(Problem p);
Problem parse_problem(const std::string& s);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MetricError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// A proven inequality failed on a concrete input. Carries the witness.
class BoundViolation : public Error {
 public:
  BoundViolation(std::string check, std::string witness)
      : Error(check + ": " + witness),
        check_(std::move(check)),
        witness_(std::move(witness)) {}
  const std::string& check() const { return check_; }
  const std::string& witness() const { return witness_; }

 private:
  std::string check_;
  std::string witness_;
};

inline bool leq_tol(double lhs, double rhs, double tol = kBoundTol) {
  return lhs <= rhs + tol * std::max(1.0, std::abs(rhs) * 1e-3);
}

// floor(a/b) that treats a/b within tolerance of an integer as that integer.
inline long floor_ratio(double a, double b) {
  const double r = a / b;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9) return static_cast<long>(nearest);
  return static_cast<long>(std::floor(r));
}

/// l = max(2, ceil(4/eps) + 1), so that 1/l < eps and 4/(l-1) <= eps.
int l_from_eps(double eps);

/// Capacity factor 2 + 4/(l-1) guaranteed by the knapsack-median routing.
inline double capacity_factor(int l) { return 2.0 + 4.0 / (l - 1); }

/// Connection-cost factor l(2l+13) + (2+4/(l-1))(2l+13) + 2(l+1).
double alpha_of_l(int l);

}  // namespace capround
