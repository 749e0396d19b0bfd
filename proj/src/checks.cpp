#include "capround/checks.hpp"

#include <cstdarg>
#include <cstdio>

namespace capround {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, format);
  std::vsnprintf(buf, sizeof buf, format, ap);
  va_end(ap);
  return buf;
}

CheckRecord& CheckLog::slot(const std::string& name, Severity severity) {
  auto it = index_.find(name);
  if (it != index_.end()) return records_[it->second];
  index_[name] = records_.size();
  records_.push_back({});
  records_.back().name = name;
  records_.back().severity = severity;
  return records_.back();
}

bool CheckLog::leq(const std::string& name, double lhs, double rhs,
                   const Witness& witness, Severity severity, double tol) {
  auto& rec = slot(name, severity);
  ++rec.evaluated;
  const double margin = rhs - lhs;
  if (margin < rec.worst_margin) rec.worst_margin = margin;
  const bool ok = leq_tol(lhs, rhs, tol);
  if (!ok) {
    if (rec.failed == 0) {
      rec.first_witness = fmt("lhs=%.12g rhs=%.12g", lhs, rhs);
      if (witness) rec.first_witness += " " + witness();
    }
    ++rec.failed;
  }
  return ok;
}

bool CheckLog::require(const std::string& name, bool ok,
                       const Witness& witness, Severity severity) {
  auto& rec = slot(name, severity);
  ++rec.evaluated;
  if (!ok) {
    if (rec.failed == 0 && witness) rec.first_witness = witness();
    ++rec.failed;
  }
  return ok;
}

void CheckLog::hard_leq(const std::string& name, double lhs, double rhs,
                        const Witness& witness, double tol) {
  if (!leq(name, lhs, rhs, witness, Severity::kBound, tol)) {
    throw BoundViolation(name, find(name)->first_witness);
  }
}

void CheckLog::hard_require(const std::string& name, bool ok,
                            const Witness& witness) {
  if (!require(name, ok, witness, Severity::kBound)) {
    throw BoundViolation(name, find(name)->first_witness);
  }
}

const CheckRecord* CheckLog::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &records_[it->second];
}

bool CheckLog::passed(const std::string& name) const {
  const auto* rec = find(name);
  return rec != nullptr && rec->failed == 0;
}

bool CheckLog::all_bounds_hold() const {
  for (const auto& r : records_) {
    if (r.severity == Severity::kBound && r.failed > 0) return false;
  }
  return true;
}

std::vector<std::string> CheckLog::failed_bounds() const {
  std::vector<std::string> out;
  for (const auto& r : records_) {
    if (r.severity == Severity::kBound && r.failed > 0) out.push_back(r.name);
  }
  return out;
}

void CheckLog::merge(const CheckLog& other) {
  for (const auto& r : other.records_) {
    auto& mine = slot(r.name, r.severity);
    mine.evaluated += r.evaluated;
    if (r.failed > 0 && mine.failed == 0) mine.first_witness = r.first_witness;
    mine.failed += r.failed;
    mine.worst_margin = std::min(mine.worst_margin, r.worst_margin);
  }
}

}  // namespace capround
