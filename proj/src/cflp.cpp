#include "capround/cflp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "capround/flow.hpp"

namespace capround {

SparseOpening sparse_open_cheapest(const Instance& inst,
                                   const FractionalSolution& sol,
                                   const ClusterSet& cs, bool cap_at_mass,
                                   CheckLog& log) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const int K = cs.num_clusters();
  const auto mass = cluster_assignment_mass(inst, sol, cs);
  SparseOpening out;
  out.facility.assign(K, -1);
  out.opening.assign(K, 0.0);
  out.y.assign(n, 0.0);
  out.x.assign(static_cast<size_t>(n) * m, 0.0);
  for (int k = 0; k < K; ++k) {
    const auto& c = cs.clusters[k];
    if (c.dense()) continue;
    auto w = [&] { return fmt("center=%d", c.center); };
    log.hard_require("sparse cluster has a nonempty ball", !c.ball.empty(), w);
    int best = c.ball.front();
    double ball_fy = 0.0;
    for (int i : c.ball) {
      if (inst.facility_cost(i) < inst.facility_cost(best)) best = i;
      ball_fy += inst.facility_cost(i) * sol.y[i];
    }
    double y_mass = 0.0;
    for (int i : c.facilities) y_mass += sol.y[i];
    const double open = cap_at_mass ? std::min(y_mass, 1.0) : 1.0;
    out.facility[k] = best;
    out.opening[k] = open;
    out.y[best] = open;
    log.leq("sparse opening cost at most twice the ball cost",
            inst.facility_cost(best) * open, 2.0 * ball_fy, w);

    double service = 0.0, lp_service = 0.0, avg_term = 0.0;
    for (int j = 0; j < m; ++j) {
      const double a = mass[static_cast<size_t>(j) * K + k];
      if (a == 0.0) continue;
      out.x[static_cast<size_t>(best) * m + j] = a;
      service += inst.fc(best, j) * a;
      double pair_rhs = 0.0;
      for (int i : c.facilities) {
        const double x = sol.xij(i, j);
        lp_service += inst.fc(i, j) * x;
        pair_rhs += x * (4.0 * inst.fc(i, j) + 4.0 * cs.l * cs.avg_cost[j]);
      }
      avg_term += cs.avg_cost[j] * a;
      log.leq("sparse service per client within four times relaxed service",
              inst.fc(best, j) * a, pair_rhs,
              [&] { return fmt("center=%d client=%d", c.center, j); });
    }
    log.leq("sparse service within relaxed service and average cost", service,
            4.0 * lp_service + 8.0 * avg_term, w);
    log.leq("sparse facility load below capacity", c.demand,
            static_cast<double>(inst.capacity()), w);
  }
  return out;
}

std::vector<double> cluster_lp_feasible(const Instance& inst,
                                        const FractionalSolution& sol,
                                        const ClusterSet& cs, int k,
                                        CheckLog& log) {
  const auto& c = cs.clusters[k];
  const double u = inst.capacity();
  std::vector<double> z;
  double mass = 0.0, y_mass = 0.0, fbar = 0.0;
  for (int i : c.facilities) {
    z.push_back(cs.load[i] / u);
    log.leq("cluster opening within relaxed opening", z.back(), sol.y[i],
            [&] { return fmt("facility=%d", i); }, Severity::kBound, 1e-7);
    mass += z.back();
    y_mass += sol.y[i];
    fbar += sol.y[i] * inst.facility_cost(i);
  }
  auto w = [&] { return fmt("center=%d", c.center); };
  log.leq("cluster opening meets demand", std::abs(u * mass - c.demand), 1e-7, w);
  log.leq("cluster opening mass within relaxed mass", mass, y_mass, w,
          Severity::kBound, 1e-7);
  log.leq("cluster instance cost within cluster budgets", cluster_cost(inst, c, z),
          c.fbar + c.pi, w, Severity::kBound, 1e-7);
  return z;
}

double cluster_cost(const Instance& inst, const Cluster& c,
                    const std::vector<double>& z) {
  double s = 0.0;
  for (size_t t = 0; t < c.facilities.size(); ++t) {
    const int i = c.facilities[t];
    s += (inst.facility_cost(i) + inst.capacity() * inst.fc(i, c.center)) * z[t];
  }
  return s;
}

namespace {

std::vector<size_t> greedy_order(const Instance& inst, const Cluster& c) {
  std::vector<size_t> order(c.facilities.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](size_t t) {
    const int i = c.facilities[t];
    return std::make_pair(
        inst.facility_cost(i) + inst.capacity() * inst.fc(i, c.center), i);
  };
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return key(a) < key(b); });
  return order;
}

}  // namespace

std::vector<double> make_almost_integral(const Instance& inst, const Cluster& c,
                                         const std::vector<double>& z,
                                         CheckLog& log) {
  std::vector<double> out(z.size(), 0.0);
  double remaining = std::accumulate(z.begin(), z.end(), 0.0);
  const double mass = remaining;
  for (size_t t : greedy_order(inst, c)) {
    if (z[t] <= 0.0 || remaining <= kSnapTol) continue;
    out[t] = std::min(1.0, remaining);
    remaining -= out[t];
    if (out[t] >= 1.0 - kSnapTol) out[t] = 1.0;
  }
  auto w = [&] { return fmt("center=%d", c.center); };
  int fractional = 0;
  for (double v : out) fractional += (v > kSnapTol && v < 1.0 - kSnapTol) ? 1 : 0;
  log.leq("almost-integral fractional count", fractional, 1.0, w);
  log.leq("almost-integral mass preserved",
          std::abs(std::accumulate(out.begin(), out.end(), 0.0) - mass), 1e-7, w);
  log.leq("almost-integral cost non-increasing", cluster_cost(inst, c, out),
          cluster_cost(inst, c, z), w, Severity::kBound, 1e-7);
  return out;
}

DenseIntegral make_integral_dense(const Instance& inst, const Cluster& c,
                                  const std::vector<double>& zprime, double eps,
                                  CheckLog& log) {
  const double u = inst.capacity();
  const size_t s = zprime.size();
  DenseIntegral out;
  out.z.assign(s, 0.0);
  out.load.assign(s, 0.0);
  int frac = -1;
  for (size_t t = 0; t < s; ++t) {
    out.load[t] = zprime[t] * u;
    if (zprime[t] >= 1.0 - kSnapTol) {
      out.z[t] = 1.0;
    } else if (zprime[t] > kSnapTol) {
      frac = static_cast<int>(t);
    }
  }
  auto w = [&] { return fmt("center=%d", c.center); };
  const double mass = std::accumulate(zprime.begin(), zprime.end(), 0.0);
  log.hard_leq("dense cluster mass at least one", 1.0, mass, w, 1e-7);
  if (frac >= 0) {
    if (zprime[frac] < eps) {
      int target = -1;
      for (size_t t : greedy_order(inst, c)) {
        if (out.z[t] == 1.0) {
          target = static_cast<int>(t);
          break;
        }
      }
      log.hard_require("dense cluster has an integral facility", target >= 0, w);
      out.load[target] += out.load[frac];
      out.load[frac] = 0.0;
    } else {
      out.z[frac] = 1.0;
    }
  }
  double served = 0.0, fz = 0.0, fzp = 0.0, sz = 0.0, szp = 0.0;
  for (size_t t = 0; t < s; ++t) {
    const int i = c.facilities[t];
    log.leq("dense load within (1+eps) capacity", out.load[t],
            (1.0 + eps) * out.z[t] * u,
            [&] { return fmt("center=%d facility=%d", c.center, i); });
    served += out.load[t];
    fz += inst.facility_cost(i) * out.z[t];
    fzp += inst.facility_cost(i) * zprime[t];
    sz += inst.fc(i, c.center) * out.load[t];
    szp += inst.fc(i, c.center) * zprime[t] * u;
  }
  log.leq("dense served demand preserved", std::abs(served - c.demand), 1e-7, w);
  log.leq("dense facility cost within 1/eps", fz, fzp / eps, w, Severity::kBound, 1e-7);
  log.leq("dense service cost within 1+eps", sz, (1.0 + eps) * szp, w,
          Severity::kBound, 1e-7);
  log.leq("dense cluster cost within 1/eps of almost-integral cost", fz + sz,
          (fzp + szp) / eps, w, Severity::kBound, 1e-7);
  log.leq("dense cluster cost within 1/eps of cluster budgets", fz + sz,
          (c.fbar + c.pi) / eps, w, Severity::kBound, 1e-7);
  return out;
}

RoundedSolution solve_cflp(const Instance& inst, const SolveOptions& opt) {
  if (inst.problem() != Problem::kCflp) throw UsageError("instance is not a cflp instance");
  if (!(opt.eps > 0.0 && opt.eps < 0.5)) {
    throw UsageError("cflp requires 0 < eps < 1/2");
  }
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const double u = inst.capacity();
  const int l = 2;
  const FractionalSolution sol = solve_natural_lp(inst);
  const double lp = sol.lp_opt;

  RoundedSolution rs;
  rs.problem = Problem::kCflp;
  rs.eps = opt.eps;
  rs.l = l;
  rs.assign = opt.assign;
  rs.n = n;
  rs.m = m;
  rs.capacity = inst.capacity();
  rs.lp_opt = lp;
  rs.alpha = cflp_cost_factor(opt.eps);
  rs.cost_bound = rs.alpha * lp;
  auto& log = rs.checks;

  const ClusterSet cs = make_clusters(inst, sol, l);
  check_clustering(inst, sol, cs, log);
  rs.num_centers = cs.num_clusters();
  const SparseOpening sp = sparse_open_cheapest(inst, sol, cs, false, log);
  const auto mass = cluster_assignment_mass(inst, sol, cs);
  const int K = cs.num_clusters();

  std::vector<double> ybar = sp.y;
  std::vector<double> xbar = sp.x;
  double dense_ci = 0.0, dense_fy = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto& c = cs.clusters[k];
    if (!c.dense()) continue;
    const auto z = cluster_lp_feasible(inst, sol, cs, k, log);
    const auto zp = make_almost_integral(inst, c, z, log);
    const auto di = make_integral_dense(inst, c, zp, opt.eps, log);
    for (size_t t = 0; t < c.facilities.size(); ++t) {
      const int i = c.facilities[t];
      ybar[i] = di.z[t];
      dense_fy += inst.facility_cost(i) * sol.y[i];
      dense_ci += inst.facility_cost(i) * di.z[t] + inst.fc(i, c.center) * di.load[t];
      if (di.load[t] == 0.0) continue;
      const double scale = di.load[t] / c.demand;
      for (int j = 0; j < m; ++j) {
        const double a = mass[static_cast<size_t>(j) * K + k];
        if (a != 0.0) xbar[static_cast<size_t>(i) * m + j] = scale * a;
      }
    }
  }
  log.leq("dense cluster cost literal form", dense_ci,
          dense_fy / opt.eps + 5.0 * lp, {}, Severity::kDiagnostic, 1e-7);
  log.leq("dense cluster cost", dense_ci, (dense_fy + 5.0 * lp) / opt.eps, {},
          Severity::kBound, 1e-7);

  std::vector<bool> open(n, false);
  double connection = 0.0;
  for (int i = 0; i < n; ++i) {
    open[i] = ybar[i] >= 1.0 - kSnapTol;
    double load = 0.0;
    for (int j = 0; j < m; ++j) {
      const double x = xbar[static_cast<size_t>(i) * m + j];
      load += x;
      connection += x * inst.fc(i, j);
    }
    log.leq("facility load within (1+eps) capacity", load,
            (1.0 + opt.eps) * ybar[i] * u, [&] { return fmt("facility=%d", i); },
            Severity::kBound, 1e-7);
    rs.max_load_over_u = std::max(rs.max_load_over_u, load / u);
    if (open[i]) {
      rs.open.push_back(i);
      rs.facility_cost += inst.facility_cost(i);
    }
  }
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += xbar[static_cast<size_t>(i) * m + j];
    log.leq("client fully assigned", std::abs(s - 1.0), 1e-7,
            [&] { return fmt("client=%d", j); });
  }
  rs.xbar = xbar;
  rs.budget_used = rs.facility_cost;
  rs.cardinality_used = static_cast<int>(rs.open.size());
  rs.connection_cost = connection;
  rs.cost = rs.facility_cost + connection;

  if (opt.assign == AssignMode::kIntegral) {
    const long cap = static_cast<long>(std::ceil((1.0 + opt.eps) * u - 1e-9));
    std::vector<long> capacity(n, 0);
    std::vector<double> cost(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
      if (open[i]) capacity[i] = cap;
      for (int j = 0; j < m; ++j) cost[static_cast<size_t>(i) * m + j] = inst.fc(i, j);
    }
    const auto res = min_cost_assignment(capacity, m, cost);
    rs.integral = res.assignment;
    rs.integral_connection_cost = res.cost;
    std::vector<long> loads(n, 0);
    for (int j = 0; j < m; ++j) ++loads[rs.integral[j]];
    rs.max_integral_load = *std::max_element(loads.begin(), loads.end());
    log.leq("integral assignment cost within fractional cost", res.cost, connection,
            {}, Severity::kBound, 1e-7);
    rs.cost = rs.facility_cost + res.cost;
  }

  rs.ok_budget = true;
  rs.ok_capacity = rs.max_load_over_u <= 1.0 + opt.eps + 1e-9;
  if (opt.assign == AssignMode::kIntegral) {
    rs.ok_capacity = rs.ok_capacity &&
                     rs.max_integral_load <= static_cast<long>(std::ceil((1.0 + opt.eps) * u - 1e-9));
  }
  rs.ok_cost = leq_tol(rs.cost, rs.cost_bound, 1e-7);
  return rs;
}

}  // namespace capround
