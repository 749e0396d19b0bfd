#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "capround/common.hpp"

namespace capround {

// kBound checks are inequalities the algorithm relies on; a failure flips the
// run verdict. kDiagnostic checks are recorded for inspection only.
enum class Severity { kBound, kDiagnostic };

struct CheckRecord {
  std::string name;
  Severity severity = Severity::kBound;
  long evaluated = 0;
  long failed = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string first_witness;
};

class CheckLog {
 public:
  using Witness = std::function<std::string()>;

  // Records lhs <= rhs (within leq_tol). Margin is rhs - lhs.
  bool leq(const std::string& name, double lhs, double rhs,
           const Witness& witness = {}, Severity severity = Severity::kBound,
           double tol = kBoundTol);
  bool require(const std::string& name, bool ok, const Witness& witness = {},
               Severity severity = Severity::kBound);

  // As leq/require, but throws BoundViolation when the inequality fails.
  void hard_leq(const std::string& name, double lhs, double rhs,
                const Witness& witness = {}, double tol = kBoundTol);
  void hard_require(const std::string& name, bool ok,
                    const Witness& witness = {});

  const std::vector<CheckRecord>& records() const { return records_; }
  const CheckRecord* find(const std::string& name) const;
  bool passed(const std::string& name) const;
  bool all_bounds_hold() const;
  std::vector<std::string> failed_bounds() const;
  void merge(const CheckLog& other);

 private:
  CheckRecord& slot(const std::string& name, Severity severity);

  std::vector<CheckRecord> records_;
  std::map<std::string, size_t> index_;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));

}  // namespace capround
