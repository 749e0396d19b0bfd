#include "capround/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace capround {

std::vector<double> avg_costs(const Instance& inst, const FractionalSolution& sol) {
  std::vector<double> out(inst.num_clients(), 0.0);
  for (int j = 0; j < inst.num_clients(); ++j) {
    for (int i = 0; i < inst.num_facilities(); ++i) {
      out[j] += sol.xij(i, j) * inst.fc(i, j);
    }
  }
  return out;
}

ClusterSet select_centers(const Instance& inst, const FractionalSolution& sol,
                          int l) {
  if (l < 2) throw Error("cluster parameter l must be at least 2");
  const int m = inst.num_clients();
  ClusterSet cs;
  cs.l = l;
  cs.avg_cost = avg_costs(inst, sol);
  cs.ctr.assign(m, -1);
  cs.cluster_of_client_center.assign(m, -1);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cs.avg_cost[a] < cs.avg_cost[b];
  });
  std::vector<bool> removed(m, false);
  for (int j : order) {
    if (removed[j]) continue;
    cs.cluster_of_client_center[j] = static_cast<int>(cs.centers.size());
    cs.centers.push_back(j);
    for (int jp = 0; jp < m; ++jp) {
      if (removed[jp]) continue;
      if (jp == j || inst.cc(j, jp) <= 2.0 * l * cs.avg_cost[jp]) {
        removed[jp] = true;
        cs.ctr[jp] = j;
      }
    }
  }
  return cs;
}

void build_clusters(const Instance& inst, const FractionalSolution& sol,
                    ClusterSet& cs) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const int K = static_cast<int>(cs.centers.size());
  const int l = cs.l;
  cs.clusters.assign(K, {});
  cs.load.assign(n, 0.0);
  cs.cluster_of_facility.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) cs.load[i] += sol.xij(i, j);
  }
  for (int k = 0; k < K; ++k) {
    auto& c = cs.clusters[k];
    c.center = cs.centers[k];
    c.avg_cost = cs.avg_cost[c.center];
    c.radius = l * c.avg_cost;
    for (int i = 0; i < n; ++i) {
      if (inst.fc(i, c.center) <= c.radius) c.ball.push_back(i);
    }
  }
  for (int i = 0; i < n; ++i) {
    int best = -1;
    for (int k = 0; k < K; ++k) {
      if (best < 0) {
        best = k;
        continue;
      }
      const double d = inst.fc(i, cs.centers[k]);
      const double db = inst.fc(i, cs.centers[best]);
      if (d < db || (d == db && cs.centers[k] < cs.centers[best])) best = k;
    }
    cs.cluster_of_facility[i] = best;
    cs.clusters[best].facilities.push_back(i);
  }
  for (auto& c : cs.clusters) {
    for (int i : c.facilities) {
      c.demand += cs.load[i];
      c.fbar += sol.y[i] * inst.facility_cost(i);
      for (int jp = 0; jp < m; ++jp) {
        const double x = sol.xij(i, jp);
        if (x != 0.0) c.pi += x * (inst.fc(i, jp) + 2.0 * l * cs.avg_cost[jp]);
      }
    }
    c.kind = floor_ratio(c.demand, inst.capacity()) >= 1 ? ClusterKind::kDense
                                                          : ClusterKind::kSparse;
  }
}

ClusterSet make_clusters(const Instance& inst, const FractionalSolution& sol,
                         int l) {
  ClusterSet cs = select_centers(inst, sol, l);
  build_clusters(inst, sol, cs);
  return cs;
}

std::vector<double> cluster_assignment_mass(const Instance& inst,
                                            const FractionalSolution& sol,
                                            const ClusterSet& cs) {
  const int m = inst.num_clients();
  const int K = cs.num_clusters();
  std::vector<double> mass(static_cast<size_t>(m) * K, 0.0);
  for (int i = 0; i < inst.num_facilities(); ++i) {
    const int k = cs.cluster_of_facility[i];
    for (int j = 0; j < m; ++j) mass[static_cast<size_t>(j) * K + k] += sol.xij(i, j);
  }
  return mass;
}

void check_clustering(const Instance& inst, const FractionalSolution& sol,
                      const ClusterSet& cs, CheckLog& log) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const int K = cs.num_clusters();
  const int l = cs.l;
  const double lp = sol.connection_cost;

  std::vector<int> seen(n, 0);
  double demand_total = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto& c = cs.clusters[k];
    for (int i : c.facilities) ++seen[i];
    demand_total += c.demand;
    bool subset = std::includes(c.facilities.begin(), c.facilities.end(),
                                c.ball.begin(), c.ball.end());
    log.require("ball inside cluster", subset,
                [&] { return fmt("center=%d", c.center); });
    double mass = 0.0;
    for (int i : c.ball) mass += sol.y[i];
    log.leq("ball mass", 1.0 - 1.0 / l, mass,
            [&] { return fmt("center=%d", c.center); });
  }
  log.require("clusters partition facilities",
              std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  log.leq("consolidated demand total", std::abs(demand_total - m), 1e-7);

  for (int a = 0; a < K; ++a) {
    for (int b = a + 1; b < K; ++b) {
      const int ja = cs.centers[a], jb = cs.centers[b];
      const double need = 2.0 * l * std::max(cs.avg_cost[ja], cs.avg_cost[jb]);
      log.require("center separation", inst.cc(ja, jb) > need, [&] {
        return fmt("centers=%d,%d dist=%.12g need>%.12g", ja, jb,
                   inst.cc(ja, jb), need);
      });
    }
  }

  for (int k = 0; k < K; ++k) {
    const int j = cs.centers[k];
    for (int i : cs.clusters[k].facilities) {
      for (int kk = 0; kk < K; ++kk) {
        const int jp = cs.centers[kk];
        log.leq("center distance via cluster facility", inst.cc(j, jp),
                2.0 * inst.fc(i, jp),
                [&] { return fmt("i=%d center=%d other=%d", i, j, jp); });
      }
      for (int jp = 0; jp < m; ++jp) {
        const double slack = 2.0 * l * cs.avg_cost[jp];
        if (cs.cluster_of_client_center[jp] < 0) {
          log.leq("non-center distance via cluster facility", inst.cc(j, jp),
                  2.0 * inst.fc(i, jp) + slack,
                  [&] { return fmt("i=%d center=%d client=%d", i, j, jp); });
        }
        log.leq("facility to own center", inst.fc(i, j), inst.fc(i, jp) + slack,
                [&] { return fmt("i=%d center=%d client=%d", i, j, jp); });
      }
    }
  }

  for (int jp = 0; jp < m; ++jp) {
    if (cs.cluster_of_client_center[jp] >= 0) continue;
    for (int k = 0; k < K; ++k) {
      const int j = cs.centers[k];
      const auto& c = cs.clusters[k];
      if (inst.cc(j, jp) <= c.radius) {
        log.leq("radius doubling", c.radius, 2.0 * l * cs.avg_cost[jp],
                [&] { return fmt("center=%d client=%d", j, jp); });
      }
    }
  }

  const auto mass = cluster_assignment_mass(inst, sol, cs);
  double consolidation = 0.0;
  for (int jp = 0; jp < m; ++jp) {
    for (int k = 0; k < K; ++k) {
      consolidation += inst.cc(cs.centers[k], jp) * mass[static_cast<size_t>(jp) * K + k];
    }
  }
  log.leq("consolidation cost", consolidation, 2.0 * (l + 1) * lp);
  double weighted = 0.0;
  for (const auto& c : cs.clusters) weighted += c.demand * c.avg_cost;
  log.leq("demand-weighted center cost", weighted, 3.0 * lp);
}

std::string clusters_csv(const ClusterSet& cs) {
  std::ostringstream os;
  os << "center,radius,demand,label\n";
  for (const auto& c : cs.clusters) {
    os << c.center << ',' << fmt("%.17g", c.radius) << ','
       << fmt("%.17g", c.demand) << ',' << (c.dense() ? "dense" : "sparse")
       << '\n';
  }
  return os.str();
}

}  // namespace capround
