#include "capround/lp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace capround {

int LpModel::add_variable(double lower, double upper, double cost,
                          std::string name) {
  if (lower > upper) throw Error("variable lower bound exceeds upper bound");
  if (!std::isfinite(lower) && !std::isfinite(upper)) {
    throw Error("free variables are not supported");
  }
  vars_.push_back({lower, upper, cost, std::move(name)});
  return num_vars() - 1;
}

int LpModel::add_row(std::vector<LpTerm> terms, Sense sense, double rhs,
                     std::string name) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw Error("row references an undeclared variable");
    }
  }
  rows_.push_back({std::move(terms), sense, rhs, std::move(name)});
  return num_rows() - 1;
}

double LpModel::objective_value(const std::vector<double>& x) const {
  double s = 0.0;
  for (int v = 0; v < num_vars(); ++v) s += vars_[v].cost * x[v];
  return s;
}

double LpModel::row_activity(int r, const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& t : rows_[r].terms) s += t.coef * x[t.var];
  return s;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string var_name(const LpModel& m, int v) {
  const std::string& name = m.vars()[v].name;
  return name.empty() ? "v" + std::to_string(v) : name;
}

void append_expr(std::ostringstream& os, const LpModel& m,
                 const std::vector<LpTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    os << (t.coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "))
       << num(std::abs(t.coef)) << ' ' << var_name(m, t.var);
    first = false;
  }
  if (first) os << "0 " << var_name(m, 0);
}

}  // namespace

std::string LpModel::to_lp_format() const {
  std::ostringstream os;
  os << "\\ capround model: " << num_vars() << " vars, " << num_rows()
     << " rows\n";
  os << "Minimize\n obj: ";
  std::vector<LpTerm> obj;
  for (int v = 0; v < num_vars(); ++v) obj.push_back({v, vars_[v].cost});
  append_expr(os, *this, obj);
  os << "\nSubject To\n";
  for (int r = 0; r < num_rows(); ++r) {
    const std::string& name = rows_[r].name;
    os << ' ' << (name.empty() ? "r" + std::to_string(r) : name) << ": ";
    append_expr(os, *this, rows_[r].terms);
    const char* op = rows_[r].sense == Sense::kLe   ? " <= "
                     : rows_[r].sense == Sense::kGe ? " >= "
                                                    : " = ";
    os << op << num(rows_[r].rhs) << "\n";
  }
  os << "Bounds\n";
  for (int v = 0; v < num_vars(); ++v) {
    const auto& var = vars_[v];
    os << ' ' << (std::isfinite(var.lower) ? num(var.lower) : "-inf")
       << " <= " << var_name(*this, v) << " <= "
       << (std::isfinite(var.upper) ? num(var.upper) : "+inf") << "\n";
  }
  os << "End\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Bounded-variable primal simplex on a dense tableau.

namespace {

class Tableau {
 public:
  Tableau(const LpModel& model, const SimplexOptions& opt)
      : model_(model), opt_(opt) {
    m_ = model.num_rows();
    n_ = model.num_vars();
    build();
  }

  LpSolution solve() {
    const int limit = opt_.max_iterations > 0 ? opt_.max_iterations
                                              : 50 * (m_ + ncols_) + 1000;
    iteration_limit_ = limit;
    if (num_artificial_ > 0) {
      set_phase_costs(/*phase_one=*/true);
      iterate();
      double infeas = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (is_artificial(basis_[r])) infeas += std::max(0.0, beta_[r]);
      }
      if (infeas > 1e-7) throw LpInfeasible("LP is infeasible");
      retire_artificials();
    }
    set_phase_costs(/*phase_one=*/false);
    iterate();
    return extract();
  }

 private:
  double& at(int r, int c) { return tab_[static_cast<size_t>(r) * ncols_ + c]; }
  bool is_artificial(int c) const { return c >= n_ + m_; }
  double nonbasic_value(int c) const { return at_upper_[c] ? ub_[c] : lb_[c]; }

  void build() {
    // Columns: structurals, one slack per row, then artificials as needed.
    std::vector<double> rhs_residual(m_);
    std::vector<int> needs_art;
    lb_.assign(n_ + m_, 0.0);
    ub_.assign(n_ + m_, 0.0);
    at_upper_.assign(n_ + m_, false);
    for (int v = 0; v < n_; ++v) {
      lb_[v] = model_.var(v).lower;
      ub_[v] = model_.var(v).upper;
      at_upper_[v] = !std::isfinite(lb_[v]);
    }
    for (int r = 0; r < m_; ++r) {
      const auto& row = model_.row(r);
      const int s = n_ + r;
      switch (row.sense) {
        case Sense::kLe:
          lb_[s] = 0.0;
          ub_[s] = kInf;
          break;
        case Sense::kGe:
          lb_[s] = -kInf;
          ub_[s] = 0.0;
          at_upper_[s] = true;
          break;
        case Sense::kEq:
          lb_[s] = ub_[s] = 0.0;
          break;
      }
      double act = 0.0;
      for (const auto& t : row.terms) act += t.coef * nonbasic_value(t.var);
      rhs_residual[r] = row.rhs - act;
      if (rhs_residual[r] < lb_[s] - opt_.feasibility_tol ||
          rhs_residual[r] > ub_[s] + opt_.feasibility_tol) {
        needs_art.push_back(r);
      }
    }
    num_artificial_ = static_cast<int>(needs_art.size());
    ncols_ = n_ + m_ + num_artificial_;
    lb_.resize(ncols_, 0.0);
    ub_.resize(ncols_, kInf);
    at_upper_.resize(ncols_, false);
    tab_.assign(static_cast<size_t>(m_) * ncols_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    row_of_.assign(ncols_, -1);

    std::vector<int> art_of_row(m_, -1);
    for (int a = 0; a < num_artificial_; ++a) art_of_row[needs_art[a]] = n_ + m_ + a;

    for (int r = 0; r < m_; ++r) {
      const auto& row = model_.row(r);
      const int s = n_ + r;
      if (art_of_row[r] < 0) {
        for (const auto& t : row.terms) at(r, t.var) += t.coef;
        at(r, s) = 1.0;
        basis_[r] = s;
        row_of_[s] = r;
        beta_[r] = rhs_residual[r];
      } else {
        // The slack rests at 0; the artificial absorbs |residual|.
        const double sign = rhs_residual[r] >= 0 ? 1.0 : -1.0;
        for (const auto& t : row.terms) at(r, t.var) += sign * t.coef;
        at(r, s) = sign;
        const int a = art_of_row[r];
        at(r, a) = 1.0;
        basis_[r] = a;
        row_of_[a] = r;
        beta_[r] = std::abs(rhs_residual[r]);
        at_upper_[s] = (row.sense == Sense::kGe);
      }
    }
  }

  void set_phase_costs(bool phase_one) {
    cost_.assign(ncols_, 0.0);
    if (phase_one) {
      for (int c = n_ + m_; c < ncols_; ++c) cost_[c] = 1.0;
    } else {
      for (int v = 0; v < n_; ++v) cost_[v] = model_.var(v).cost;
    }
    reduced_.assign(cost_.begin(), cost_.end());
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c < ncols_; ++c) reduced_[c] -= cb * at(r, c);
    }
    for (int r = 0; r < m_; ++r) reduced_[basis_[r]] = 0.0;
  }

  // Entering column and direction (+1 increase, -1 decrease), or -1.
  int choose_entering(int& dir) const {
    int best = -1;
    double best_score = 0.0;
    for (int c = 0; c < ncols_; ++c) {
      if (row_of_[c] >= 0 || lb_[c] == ub_[c]) continue;
      const double d = reduced_[c];
      int cdir = 0;
      if (!at_upper_[c] && d < -opt_.optimality_tol) {
        cdir = 1;
      } else if (at_upper_[c] && d > opt_.optimality_tol) {
        cdir = -1;
      }
      if (cdir == 0) continue;
      if (bland_) {
        dir = cdir;
        return c;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = c;
        dir = cdir;
      }
    }
    return best;
  }

  void iterate() {
    int stalled = 0;
    const int stall_limit = 5 * (m_ + n_);
    bland_ = false;
    while (true) {
      if (++iterations_ > iteration_limit_) {
        throw LpNumericFailure("simplex iteration limit reached");
      }
      int dir = 0;
      const int q = choose_entering(dir);
      if (q < 0) return;

      // Ratio test.
      double t_best = kInf;
      int p_best = -1;
      double piv_best = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, q);
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double rate = -dir * a;  // d x_B[r] / dt
        const int b = basis_[r];
        double limit;
        if (rate < 0) {
          if (!std::isfinite(lb_[b])) continue;
          limit = (beta_[r] - lb_[b]) / -rate;
        } else {
          if (!std::isfinite(ub_[b])) continue;
          limit = (ub_[b] - beta_[r]) / rate;
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (limit < t_best - 1e-12) {
          take = true;
        } else if (limit <= t_best + 1e-12) {
          take = bland_ ? b < basis_[p_best] : std::abs(a) > piv_best;
        }
        if (take) {
          t_best = std::min(limit, t_best);
          p_best = r;
          piv_best = std::abs(a);
        }
      }
      const double flip = ub_[q] - lb_[q];
      if (p_best < 0 && !std::isfinite(flip)) {
        throw LpUnbounded("LP is unbounded");
      }

      const bool do_flip = flip <= t_best;
      const double t = do_flip ? flip : t_best;
      if (t > 1e-12) {
        stalled = 0;
        bland_ = false;
      } else if (++stalled > stall_limit) {
        bland_ = true;
      }

      if (t != 0.0) {
        for (int r = 0; r < m_; ++r) {
          const double a = at(r, q);
          if (a != 0.0) beta_[r] -= dir * a * t;
        }
      }
      if (do_flip) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      const double entering_value = nonbasic_value(q) + dir * t;
      const int leaving = basis_[p_best];
      const double rate = -dir * at(p_best, q);
      pivot(p_best, q);
      at_upper_[leaving] = rate > 0;
      beta_[p_best] = entering_value;
    }
  }

  void pivot(int p, int q) {
    const double inv = 1.0 / at(p, q);
    nz_.clear();
    for (int c = 0; c < ncols_; ++c) {
      double& v = at(p, c);
      if (v == 0.0) continue;
      v *= inv;
      if (std::abs(v) < 1e-14) {
        v = 0.0;
      } else {
        nz_.push_back(c);
      }
    }
    at(p, q) = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == p) continue;
      const double f = at(r, q);
      if (f == 0.0) continue;
      double* row = &tab_[static_cast<size_t>(r) * ncols_];
      const double* prow = &tab_[static_cast<size_t>(p) * ncols_];
      for (int c : nz_) row[c] -= f * prow[c];
      row[q] = 0.0;
    }
    const double fd = reduced_[q];
    if (fd != 0.0) {
      const double* prow = &tab_[static_cast<size_t>(p) * ncols_];
      for (int c : nz_) reduced_[c] -= fd * prow[c];
    }
    reduced_[q] = 0.0;
    const int leaving = basis_[p];
    row_of_[leaving] = -1;
    basis_[p] = q;
    row_of_[q] = p;
  }

  void retire_artificials() {
    for (int c = n_ + m_; c < ncols_; ++c) {
      ub_[c] = 0.0;
      at_upper_[c] = false;
    }
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int c = 0; c < n_ + m_; ++c) {
        if (row_of_[c] >= 0) continue;
        if (std::abs(at(r, c)) > best_abs) {
          best_abs = std::abs(at(r, c));
          best = c;
        }
      }
      if (best < 0) {
        beta_[r] = 0.0;  // redundant row; artificial stays basic, fixed at 0
        continue;
      }
      const double value = nonbasic_value(best);
      pivot(r, best);
      beta_[r] = value;
    }
  }

  LpSolution extract() {
    LpSolution sol;
    sol.x.assign(n_, 0.0);
    sol.status.assign(n_, VarStatus::kAtLower);
    for (int v = 0; v < n_; ++v) {
      double x;
      if (row_of_[v] >= 0) {
        x = beta_[row_of_[v]];
        sol.status[v] = VarStatus::kBasic;
      } else {
        x = nonbasic_value(v);
        sol.status[v] = at_upper_[v] ? VarStatus::kAtUpper : VarStatus::kAtLower;
      }
      if (std::abs(x - lb_[v]) <= kSnapTol) x = lb_[v];
      if (std::abs(x - ub_[v]) <= kSnapTol) x = ub_[v];
      if (x < lb_[v]) {
        if (x < lb_[v] - 1e-7) throw LpNumericFailure("solution below bound");
        x = lb_[v];
      }
      if (x > ub_[v]) {
        if (x > ub_[v] + 1e-7) throw LpNumericFailure("solution above bound");
        x = ub_[v];
      }
      sol.x[v] = x;
    }
    sol.tight.assign(m_, false);
    for (int r = 0; r < m_; ++r) {
      const auto& row = model_.row(r);
      const double act = model_.row_activity(r, sol.x);
      const double scale = std::max(1.0, std::abs(row.rhs));
      const double viol = row.sense == Sense::kLe   ? act - row.rhs
                          : row.sense == Sense::kGe ? row.rhs - act
                                                    : std::abs(act - row.rhs);
      if (viol > 1e-6 * scale) {
        throw LpNumericFailure("row " + std::to_string(r) +
                               " violated by " + std::to_string(viol));
      }
      sol.tight[r] = row.sense == Sense::kEq ||
                     std::abs(act - row.rhs) <= kTightTol * scale;
    }
    sol.objective = model_.objective_value(sol.x);
    sol.iterations = iterations_;
    return sol;
  }

  const LpModel& model_;
  SimplexOptions opt_;
  int m_ = 0, n_ = 0, ncols_ = 0, num_artificial_ = 0;
  std::vector<double> tab_, beta_, lb_, ub_, cost_, reduced_;
  std::vector<int> basis_, row_of_, nz_;
  std::vector<bool> at_upper_;
  bool bland_ = false;
  int iterations_ = 0;
  int iteration_limit_ = 0;
};

std::atomic<bool> g_verify{false};
std::atomic<long> g_verified{0};

}  // namespace

LpSolution solve_extreme(const LpModel& model, const SimplexOptions& opt) {
  if (model.num_vars() == 0) {
    for (int r = 0; r < model.num_rows(); ++r) {
      const auto& row = model.row(r);
      const bool ok = row.sense == Sense::kLe   ? 0.0 <= row.rhs + 1e-9
                      : row.sense == Sense::kGe ? 0.0 >= row.rhs - 1e-9
                                                : std::abs(row.rhs) <= 1e-9;
      if (!ok) throw LpInfeasible("LP is infeasible");
    }
    LpSolution sol;
    sol.tight.assign(model.num_rows(), true);
    return sol;
  }
  Tableau t(model, opt);
  LpSolution sol = t.solve();
  if (g_verify.load() && model.num_vars() <= 500) {
    ++g_verified;
    if (!is_extreme_point(model, sol.x)) {
      throw LpNumericFailure("returned point is not an extreme point");
    }
  }
  return sol;
}

void set_extreme_point_verification(bool on) { g_verify.store(on); }
long extreme_point_verifications() { return g_verified.load(); }

// ---------------------------------------------------------------------------
// Exact rank of the active set.

int exact_active_rank(const LpModel& model, const std::vector<double>& x,
                      double tol) {
  const int n = model.num_vars();
  // Variables at a bound contribute unit rows; eliminate their columns.
  std::vector<int> free_col(n, -1);
  int at_bound = 0, nfree = 0;
  for (int v = 0; v < n; ++v) {
    const auto& var = model.var(v);
    if (std::abs(x[v] - var.lower) <= tol || std::abs(x[v] - var.upper) <= tol) {
      ++at_bound;
    } else {
      free_col[v] = nfree++;
    }
  }
  std::vector<std::vector<mpq_class>> rows;
  for (int r = 0; r < model.num_rows(); ++r) {
    const auto& row = model.row(r);
    const double act = model.row_activity(r, x);
    const bool active = row.sense == Sense::kEq ||
                        std::abs(act - row.rhs) <= tol * std::max(1.0, std::abs(row.rhs));
    if (!active) continue;
    std::vector<mpq_class> dense(nfree, 0);
    bool any = false;
    for (const auto& t : row.terms) {
      if (free_col[t.var] < 0 || t.coef == 0.0) continue;
      dense[free_col[t.var]] += mpq_class(t.coef);
      any = true;
    }
    if (any) rows.push_back(std::move(dense));
  }
  int rank = 0;
  for (int c = 0; c < nfree && rank < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][c] == 0) continue;
      const mpq_class f = rows[r][c] / rows[rank][c];
      for (int k = c; k < nfree; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return at_bound + rank;
}

bool is_extreme_point(const LpModel& model, const std::vector<double>& x,
                      double tol) {
  return exact_active_rank(model, x, tol) == model.num_vars();
}

}  // namespace capround
