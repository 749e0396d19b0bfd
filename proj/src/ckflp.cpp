#include "capround/ckflp.hpp"

#include <algorithm>
#include <cmath>

#include "capround/flow.hpp"

namespace capround {

void verify_property_iv(const Instance& inst, const FractionalSolution& sol,
                        const ClusterSet& cs, const CenterForest& forest,
                        const SparseOpening& sparse, CheckLog& log) {
  const int m = inst.num_clients();
  for (int k = 0; k < cs.num_clusters(); ++k) {
    const auto& c = cs.clusters[k];
    if (c.dense() || sparse.facility[k] < 0) continue;
    const double gap = 1.0 - sparse.opening[k];
    const int e = forest.eta[k];
    const double eta_cost =
        (e >= 0 && e != k) ? inst.cc(c.center, cs.clusters[e].center) : 0.0;
    auto w = [&] { return fmt("center=%d yhat=%.12g", c.center, sparse.opening[k]); };
    for (int i : c.facilities) {
      for (int j = 0; j < m; ++j) {
        if (sol.xij(i, j) <= 0.0) continue;
        log.leq("nearest-center gap per pair", gap * eta_cost,
                4.0 * (inst.fc(i, j) + 2.0 * cs.l * cs.avg_cost[j]),
                [&] { return fmt("center=%d facility=%d client=%d", c.center, i, j); },
                Severity::kDiagnostic);
      }
    }
    log.leq("nearest-center gap summed", gap * c.demand * eta_cost, 4.0 * c.pi, w,
            Severity::kDiagnostic);
    log.hard_leq("sparse opening gap within eight cluster budgets",
                 gap * c.demand * forest.sigma_cost[k], 8.0 * c.pi, w, 1e-7);
  }
}

std::vector<double> ckflp_witness(const Instance& inst,
                                  const FractionalSolution& sol,
                                  const ClusterSet& cs, const Lp2State& state,
                                  CheckLog& log) {
  std::vector<double> w(inst.num_facilities(), 0.0);
  const SparseOpening sp = sparse_open_cheapest(inst, sol, cs, true, log);
  for (int k = 0; k < cs.num_clusters(); ++k) {
    const auto& c = cs.clusters[k];
    if (c.dense()) {
      CheckLog scratch;
      const auto z = cluster_lp_feasible(inst, sol, cs, k, scratch);
      const auto zp = make_almost_integral(inst, c, z, scratch);
      log.merge(scratch);
      for (size_t t = 0; t < c.facilities.size(); ++t) w[c.facilities[t]] = zp[t];
    } else {
      const int i = sp.facility[k];
      const auto& T = state.T[k];
      log.require("cheapest ball facility lies in the truncated set",
                  std::find(T.begin(), T.end(), i) != T.end(),
                  [&] { return fmt("center=%d facility=%d", c.center, i); });
      w[i] = sp.opening[k];
    }
  }
  return w;
}

double ckflp_cost_envelope(const ClusterSet& cs, double lp_opt, int l) {
  double dense = 0.0;
  for (const auto& c : cs.clusters) {
    if (c.dense()) dense += c.fbar + c.pi;
  }
  return (alpha_of_l(l) + 2.0) * lp_opt + dense;
}

RoundedSolution solve_ckflp(const Instance& inst, const SolveOptions& opt) {
  if (inst.problem() != Problem::kCkflp) throw UsageError("instance is not a ckflp instance");
  if (!(opt.eps > 0)) throw UsageError("eps must be positive");
  if (inst.k() < 1) throw UsageError("ckflp requires k >= 1");
  const int l = l_from_eps(opt.eps);
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const double u = inst.capacity();

  MetaRun run = run_meta_pipeline(inst, solve_natural_lp(inst), l, OpenMode::kLarger, true);
  auto& log = run.checks;
  const double lp = run.sol.lp_opt;
  run.witness = ckflp_witness(inst, run.sol, run.cs, run.lp2, log);
  run.witness_cost = run.lp2.cost(run.witness);
  log.leq("witness feasible for opening LP", lp2_violation(run.lp2, run.witness), 0.0,
          {}, Severity::kBound, 1e-7);
  log.leq("rounded opening cost within witness cost", run.rounded.cost,
          run.witness_cost, {}, Severity::kBound, 1e-7);
  log.leq("consolidation cost", run.costs.consolidation, 2.0 * (l + 1) * lp);
  log.leq("cross meta-cluster travel cost", run.costs.travel,
          l * (2.0 * l + 13.0) * lp, {}, Severity::kDiagnostic);
  log.leq("delivery cost", run.costs.delivery,
          capacity_factor(l) * (2.0 * l + 13.0) * lp, {}, Severity::kDiagnostic);

  {
    const ClusterSet cs2 = make_clusters(inst, run.sol, 2);
    const CenterForest forest2 = build_forest(inst, cs2);
    const SparseOpening sp2 = sparse_open_cheapest(inst, run.sol, cs2, true, log);
    verify_property_iv(inst, run.sol, cs2, forest2, sp2, log);
  }

  RoundedSolution rs;
  rs.problem = Problem::kCkflp;
  rs.eps = opt.eps;
  rs.l = l;
  rs.assign = opt.assign;
  rs.n = n;
  rs.m = m;
  rs.capacity = inst.capacity();
  rs.budget_or_k = inst.k();
  rs.lp_opt = lp;
  rs.alpha = alpha_of_l(l);
  rs.cost_bound = ckflp_cost_envelope(run.cs, lp, l);
  rs.witness_cost = run.witness_cost;
  rs.frac_after_round = static_cast<int>(run.rounded.fractional.size());
  rs.iterations = run.rounded.history;
  rs.num_centers = run.cs.num_clusters();
  rs.mcs = summarize_mcs(run.cs, run.h, run.open, run.routed);
  rs.xbar = run.xbar;
  for (int i = 0; i < n; ++i) {
    if (run.open[i]) {
      rs.open.push_back(i);
      rs.facility_cost += inst.facility_cost(i);
    }
    rs.max_load_over_u = std::max(rs.max_load_over_u, run.routed.g[i] / u);
  }
  rs.budget_used = rs.facility_cost;
  rs.cardinality_used = static_cast<int>(rs.open.size());
  rs.connection_cost = run.costs.total;
  rs.cost = rs.facility_cost + rs.connection_cost;
  log.leq("cardinality respected", rs.cardinality_used, static_cast<double>(inst.k()));

  if (opt.assign == AssignMode::kIntegral) {
    double icost = 0.0;
    rs.integral = integralize_assignment(inst, run.xbar, run.open, icost);
    std::vector<long> loads(n, 0);
    for (int j = 0; j < m; ++j) ++loads[rs.integral[j]];
    rs.max_integral_load = *std::max_element(loads.begin(), loads.end());
    rs.integral_connection_cost = icost;
    log.leq("integral assignment cost within fractional cost", icost,
            rs.connection_cost, {}, Severity::kBound, 1e-7);
    rs.cost = rs.facility_cost + icost;
  }
  rs.checks = std::move(run.checks);

  const double factor = capacity_factor(l);
  rs.ok_budget = rs.cardinality_used <= inst.k();
  rs.ok_capacity = rs.max_load_over_u <= factor + 1e-7;
  if (opt.assign == AssignMode::kIntegral) {
    rs.ok_capacity = rs.ok_capacity &&
                     rs.max_integral_load <= static_cast<long>(std::ceil(factor * u - 1e-9));
  }
  rs.ok_cost = leq_tol(rs.cost, rs.cost_bound, 1e-7);
  return rs;
}

}  // namespace capround
