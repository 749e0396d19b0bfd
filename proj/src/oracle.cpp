#include "capround/oracle.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "capround/checks.hpp"
#include "capround/flow.hpp"

namespace capround {

namespace {

ExactResult enumerate(const Instance& inst, bool with_costs,
                      const std::function<bool(std::uint32_t, double, int)>& allowed) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  if (n > kOracleMaxFacilities) {
    throw UsageError(fmt("oracle handles at most %d facilities", kOracleMaxFacilities));
  }
  std::vector<double> cost(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) cost[static_cast<size_t>(i) * m + j] = inst.fc(i, j);
  }
  ExactResult best;
  bool have = false;
  const std::uint32_t end = std::uint32_t{1} << n;
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    const int count = std::popcount(mask);
    if (static_cast<long>(count) * inst.capacity() < m) continue;
    double fsum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1U) fsum += inst.facility_cost(i);
    }
    if (!allowed(mask, fsum, count)) continue;
    const double base = with_costs ? fsum : 0.0;
    if (have && base >= best.cost) continue;
    std::vector<long> cap(n, 0);
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1U) cap[i] = inst.capacity();
    }
    const auto res = min_cost_assignment(cap, m, cost);
    const double total = base + res.cost;
    if (!have || total < best.cost) {
      have = true;
      best.cost = total;
      best.mask = mask;
      best.assignment = res.assignment;
    }
  }
  if (!have) throw InfeasibleError("no facility subset satisfies the constraints");
  for (int i = 0; i < n; ++i) {
    if (best.mask >> i & 1U) best.open.push_back(i);
  }
  return best;
}

}  // namespace

ExactResult exact_ckm(const Instance& inst) {
  const double budget = inst.budget();
  return enumerate(inst, false, [&](std::uint32_t, double fsum, int) {
    return fsum <= budget + kBoundTol;
  });
}

ExactResult exact_cflp(const Instance& inst) {
  return enumerate(inst, true, [](std::uint32_t, double, int) { return true; });
}

ExactResult exact_ckflp(const Instance& inst) {
  const int k = inst.k();
  if (k < 1) throw InfeasibleError("k must be at least 1");
  return enumerate(inst, true, [&](std::uint32_t, double, int count) { return count <= k; });
}

ExactResult exact_solve(const Instance& inst) {
  switch (inst.problem()) {
    case Problem::kCkm:
      return exact_ckm(inst);
    case Problem::kCflp:
      return exact_cflp(inst);
    case Problem::kCkflp:
      return exact_ckflp(inst);
  }
  throw UsageError("unknown problem");
}

// ---------------------------------------------------------------------------
// Exact simplex

namespace {

struct Tableau {
  std::vector<std::vector<mpq_class>> a;
  std::vector<mpq_class> rhs;
  std::vector<int> basis;
  int cols = 0;

  void pivot(int r, int c) {
    const mpq_class p = a[r][c];
    for (auto& v : a[r]) v /= p;
    rhs[r] /= p;
    for (size_t s = 0; s < a.size(); ++s) {
      if (static_cast<int>(s) == r || sgn(a[s][c]) == 0) continue;
      const mpq_class f = a[s][c];
      for (int t = 0; t < cols; ++t) {
        if (sgn(a[r][t]) != 0) a[s][t] -= f * a[r][t];
      }
      rhs[s] -= f * rhs[r];
    }
    basis[r] = c;
  }

  // Bland's rule on cost vector `cost`; columns with allowed[c] false never
  // enter.
  void optimize(const std::vector<mpq_class>& cost, const std::vector<bool>& allowed) {
    const int rows = static_cast<int>(a.size());
    while (true) {
      int enter = -1;
      for (int c = 0; c < cols && enter < 0; ++c) {
        if (!allowed[c]) continue;
        bool basic = false;
        for (int b : basis) basic = basic || b == c;
        if (basic) continue;
        mpq_class d = cost[c];
        for (int r = 0; r < rows; ++r) d -= cost[basis[r]] * a[r][c];
        if (sgn(d) < 0) enter = c;
      }
      if (enter < 0) return;
      int leave = -1;
      mpq_class best;
      for (int r = 0; r < rows; ++r) {
        if (sgn(a[r][enter]) <= 0) continue;
        const mpq_class ratio = rhs[r] / a[r][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) throw LpUnbounded("linear program is unbounded");
      pivot(leave, enter);
    }
  }
};

}  // namespace

RationalLpResult rational_lp_resolve(const LpModel& model) {
  const int nv = model.num_vars();
  // Each model variable is offset + sum sign * column.
  struct Map {
    mpq_class offset;
    std::vector<std::pair<int, int>> cols;
  };
  std::vector<Map> map(nv);
  std::vector<mpq_class> cost;
  mpq_class cost0 = 0;
  std::vector<std::pair<int, mpq_class>> upper_rows;  // column <= value
  int ncols = 0;
  for (int v = 0; v < nv; ++v) {
    const auto& var = model.var(v);
    const mpq_class c(var.cost);
    if (std::isfinite(var.lower)) {
      map[v].offset = mpq_class(var.lower);
      map[v].cols.push_back({ncols, 1});
      cost.push_back(c);
      if (std::isfinite(var.upper)) {
        upper_rows.push_back({ncols, mpq_class(var.upper) - mpq_class(var.lower)});
      }
      ++ncols;
    } else if (std::isfinite(var.upper)) {
      map[v].offset = mpq_class(var.upper);
      map[v].cols.push_back({ncols++, -1});
      cost.push_back(-c);
    } else {
      map[v].offset = 0;
      map[v].cols.push_back({ncols++, 1});
      map[v].cols.push_back({ncols++, -1});
      cost.push_back(c);
      cost.push_back(-c);
    }
    cost0 += c * map[v].offset;
  }
  const int structural = ncols;

  struct StdRow {
    std::vector<std::pair<int, mpq_class>> terms;
    Sense sense;
    mpq_class rhs;
  };
  std::vector<StdRow> rows;
  for (const auto& row : model.rows()) {
    StdRow sr{{}, row.sense, mpq_class(row.rhs)};
    for (const auto& t : row.terms) {
      const mpq_class coef(t.coef);
      sr.rhs -= coef * map[t.var].offset;
      for (const auto& [col, sign] : map[t.var].cols) sr.terms.push_back({col, coef * sign});
    }
    rows.push_back(std::move(sr));
  }
  for (const auto& [col, val] : upper_rows) rows.push_back({{{col, mpq_class(1)}}, Sense::kLe, val});

  const int nrows = static_cast<int>(rows.size());
  int slack_cols = 0;
  for (const auto& r : rows) slack_cols += r.sense == Sense::kEq ? 0 : 1;
  Tableau tab;
  tab.cols = structural + slack_cols + nrows;
  tab.a.assign(nrows, std::vector<mpq_class>(tab.cols, 0));
  tab.rhs.assign(nrows, 0);
  tab.basis.assign(nrows, -1);
  int slack = structural;
  const int art0 = structural + slack_cols;
  for (int r = 0; r < nrows; ++r) {
    for (const auto& [col, coef] : rows[r].terms) tab.a[r][col] += coef;
    if (rows[r].sense == Sense::kLe) tab.a[r][slack++] = 1;
    if (rows[r].sense == Sense::kGe) tab.a[r][slack++] = -1;
    tab.rhs[r] = rows[r].rhs;
    if (sgn(tab.rhs[r]) < 0) {
      for (auto& v : tab.a[r]) v = -v;
      tab.rhs[r] = -tab.rhs[r];
    }
    tab.a[r][art0 + r] = 1;
    tab.basis[r] = art0 + r;
  }

  std::vector<mpq_class> phase1(tab.cols, 0);
  for (int r = 0; r < nrows; ++r) phase1[art0 + r] = 1;
  std::vector<bool> allowed(tab.cols, true);
  tab.optimize(phase1, allowed);
  mpq_class infeas = 0;
  for (int r = 0; r < nrows; ++r) {
    if (tab.basis[r] >= art0) infeas += tab.rhs[r];
  }
  if (sgn(infeas) > 0) throw LpInfeasible("linear program is infeasible");
  for (int r = 0; r < nrows; ++r) {
    if (tab.basis[r] < art0) continue;
    for (int c = 0; c < art0; ++c) {
      if (sgn(tab.a[r][c]) != 0) {
        tab.pivot(r, c);
        break;
      }
    }
  }
  for (int c = art0; c < tab.cols; ++c) allowed[c] = false;
  std::vector<mpq_class> phase2(tab.cols, 0);
  for (int c = 0; c < structural; ++c) phase2[c] = cost[c];
  tab.optimize(phase2, allowed);

  std::vector<mpq_class> col_value(tab.cols, 0);
  for (int r = 0; r < nrows; ++r) col_value[tab.basis[r]] = tab.rhs[r];
  RationalLpResult out;
  out.objective = cost0;
  for (int c = 0; c < structural; ++c) out.objective += cost[c] * col_value[c];
  out.x.resize(nv);
  for (int v = 0; v < nv; ++v) {
    out.x[v] = map[v].offset;
    for (const auto& [col, sign] : map[v].cols) out.x[v] += sign * col_value[col];
  }
  return out;
}

}  // namespace capround
