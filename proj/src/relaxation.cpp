#include "capround/relaxation.hpp"

#include "capround/checks.hpp"

namespace capround {

LpModel build_natural_lp(const Instance& inst) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const bool pay_facilities = inst.problem() != Problem::kCkm;
  LpModel lp;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      lp.add_variable(0.0, 1.0, inst.fc(i, j), fmt("x_%d_%d", i, j));
    }
  }
  const int y0 = n * m;
  for (int i = 0; i < n; ++i) {
    lp.add_variable(0.0, 1.0, pay_facilities ? inst.facility_cost(i) : 0.0,
                   fmt("y_%d", i));
  }
  for (int j = 0; j < m; ++j) {
    std::vector<LpTerm> row;
    for (int i = 0; i < n; ++i) row.push_back({i * m + j, 1.0});
    lp.add_row(std::move(row), Sense::kEq, 1.0, fmt("assign_%d", j));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<LpTerm> row;
    for (int j = 0; j < m; ++j) row.push_back({i * m + j, 1.0});
    row.push_back({y0 + i, -static_cast<double>(inst.capacity())});
    lp.add_row(std::move(row), Sense::kLe, 0.0, fmt("cap_%d", i));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      lp.add_row({{i * m + j, 1.0}, {y0 + i, -1.0}}, Sense::kLe, 0.0,
                 fmt("open_%d_%d", i, j));
    }
  }
  if (inst.problem() == Problem::kCkm) {
    std::vector<LpTerm> row;
    for (int i = 0; i < n; ++i) row.push_back({y0 + i, inst.facility_cost(i)});
    lp.add_row(std::move(row), Sense::kLe, inst.budget(), "budget");
  } else if (inst.problem() == Problem::kCkflp) {
    std::vector<LpTerm> row;
    for (int i = 0; i < n; ++i) row.push_back({y0 + i, 1.0});
    lp.add_row(std::move(row), Sense::kLe, static_cast<double>(inst.k()),
               "cardinality");
  }
  return lp;
}

FractionalSolution solve_natural_lp(const Instance& inst) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  if (inst.problem() == Problem::kCkflp &&
      (inst.k() < 1 ||
       static_cast<long>(inst.k()) * inst.capacity() < m)) {
    throw InfeasibleError("k facilities cannot serve all clients");
  }
  if (static_cast<long>(n) * inst.capacity() < m) {
    throw InfeasibleError("total capacity below number of clients");
  }
  const LpModel lp = build_natural_lp(inst);
  LpSolution sol;
  try {
    sol = solve_extreme(lp);
  } catch (const LpInfeasible&) {
    throw InfeasibleError("natural relaxation is infeasible");
  }
  FractionalSolution out;
  out.n = n;
  out.m = m;
  out.x.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n) * m);
  out.y.assign(sol.x.begin() + static_cast<long>(n) * m, sol.x.end());
  for (int i = 0; i < n; ++i) {
    out.facility_cost += inst.facility_cost(i) * out.y[i];
    for (int j = 0; j < m; ++j) out.connection_cost += inst.fc(i, j) * out.xij(i, j);
  }
  out.lp_opt = sol.objective;
  return out;
}

}  // namespace capround
