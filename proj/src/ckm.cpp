#include "capround/ckm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "capround/flow.hpp"

namespace capround {

namespace {

constexpr double kTight = kTightTol;

double sum_over(const std::vector<int>& ids, const std::vector<double>& w) {
  double s = 0.0;
  for (int i : ids) s += w[i];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Opening LP

double Lp2State::cost(const std::vector<double>& w) const {
  double c = constant;
  for (int i = 0; i < num_facilities; ++i) c += coef[i] * w[i];
  return c;
}

std::vector<int> Lp2State::eligible_facilities() const {
  std::vector<int> out;
  for (int i = 0; i < num_facilities; ++i) {
    if (owner[i] >= 0) out.push_back(i);
  }
  return out;
}

namespace {

// Residual model over `active` facilities with `one` facilities fixed at 1.
struct ResidualModel {
  LpModel lp;
  std::vector<int> facility;  // var -> facility
};

ResidualModel residual_model(const Lp2State& s, const std::vector<bool>& active,
                             const std::vector<bool>& one,
                             const std::vector<std::vector<int>>& group_sets,
                             const std::vector<long>& group_req) {
  ResidualModel rm;
  std::vector<int> var(s.num_facilities, -1);
  for (int i = 0; i < s.num_facilities; ++i) {
    if (!active[i]) continue;
    var[i] = rm.lp.add_variable(0.0, 1.0, s.coef[i]);
    rm.facility.push_back(i);
  }
  auto collect = [&](const std::vector<int>& ids, std::vector<LpTerm>& terms,
                     double& fixed) {
    for (int i : ids) {
      if (var[i] >= 0) terms.push_back({var[i], 1.0});
      if (one[i]) fixed += 1.0;
    }
  };
  const int K = static_cast<int>(s.T.size());
  for (int k = 0; k < K; ++k) {
    std::vector<LpTerm> terms;
    double fixed = 0.0;
    collect(s.T[k], terms, fixed);
    if (s.sparse[k]) {
      if (!terms.empty() || fixed > 1.0) rm.lp.add_row(terms, Sense::kLe, 1.0 - fixed);
    } else {
      const double rhs = static_cast<double>(s.dense_floor[k]) - fixed;
      if (rhs > 0) rm.lp.add_row(terms, Sense::kGe, rhs);
    }
  }
  for (size_t g = 0; g < group_sets.size(); ++g) {
    if (group_req[g] <= 0) continue;
    std::vector<LpTerm> terms;
    double fixed = 0.0;
    for (int k : group_sets[g]) collect(s.T[k], terms, fixed);
    const double rhs = static_cast<double>(group_req[g]) - fixed;
    if (rhs > 0) rm.lp.add_row(terms, Sense::kGe, rhs);
  }
  if (s.has_budget) {
    std::vector<LpTerm> terms;
    double spent = 0.0;
    for (int i = 0; i < s.num_facilities; ++i) {
      if (var[i] >= 0) terms.push_back({var[i], s.fcost[i]});
      if (one[i]) spent += s.fcost[i];
    }
    rm.lp.add_row(terms, Sense::kLe, s.budget - spent);
  }
  if (s.has_cardinality) {
    std::vector<LpTerm> terms;
    double used = 0.0;
    for (int i = 0; i < s.num_facilities; ++i) {
      if (var[i] >= 0) terms.push_back({var[i], 1.0});
      if (one[i]) used += 1.0;
    }
    rm.lp.add_row(terms, Sense::kLe, static_cast<double>(s.cardinality) - used);
  }
  return rm;
}

void initial_groups(const Lp2State& s, std::vector<std::vector<int>>& sets,
                    std::vector<long>& req) {
  sets.clear();
  req.clear();
  for (const auto& g : s.groups) {
    sets.push_back(g.clusters);
    req.push_back(g.requirement);
  }
}

}  // namespace

LpModel Lp2State::full_model() const {
  std::vector<bool> active(num_facilities, false), one(num_facilities, false);
  for (int i = 0; i < num_facilities; ++i) active[i] = owner[i] >= 0;
  std::vector<std::vector<int>> sets;
  std::vector<long> req;
  initial_groups(*this, sets, req);
  return residual_model(*this, active, one, sets, req).lp;
}

Lp2State build_lp2(const Instance& inst, const ClusterSet& cs,
                   const Hierarchy& h, const std::vector<std::vector<int>>& T,
                   bool with_facility_costs) {
  const int n = inst.num_facilities();
  const int K = cs.num_clusters();
  const double u = inst.capacity();
  Lp2State s;
  s.num_facilities = n;
  s.T = T;
  s.owner.assign(n, -1);
  s.sparse.assign(K, false);
  s.dense_floor.assign(K, 0);
  s.coef.assign(n, 0.0);
  s.fcost = inst.facility_costs();
  s.group_of_cluster.assign(K, -1);
  for (int k = 0; k < K; ++k) {
    const auto& c = cs.clusters[k];
    s.sparse[k] = !c.dense();
    if (c.dense()) s.dense_floor[k] = floor_ratio(c.demand, u);
    for (int i : T[k]) {
      s.owner[i] = k;
      if (c.dense()) {
        s.coef[i] = u * inst.fc(i, c.center);
      } else {
        s.coef[i] = c.demand * (inst.fc(i, c.center) - h.forest.sigma_cost[k]);
      }
      if (with_facility_costs) s.coef[i] += inst.facility_cost(i);
    }
    if (!c.dense()) s.constant += c.demand * h.forest.sigma_cost[k];
  }
  for (size_t r = 0; r < h.mcs.size(); ++r) {
    const auto& mc = h.mcs[r];
    if (!mc.g1.empty()) {
      Lp2Group g{static_cast<int>(r), true, mc.g1, mc.gamma};
      for (int k : mc.g1) s.group_of_cluster[k] = static_cast<int>(s.groups.size());
      s.groups.push_back(g);
    }
    if (!mc.g2.empty()) {
      Lp2Group g{static_cast<int>(r), false, mc.g2, mc.g2_requirement};
      for (int k : mc.g2) s.group_of_cluster[k] = static_cast<int>(s.groups.size());
      s.groups.push_back(g);
    }
  }
  if (inst.problem() == Problem::kCkflp) {
    s.has_cardinality = true;
    s.cardinality = inst.k();
  } else {
    s.has_budget = true;
    s.budget = inst.budget();
  }
  return s;
}

std::vector<double> lp2_witness(const Instance& inst,
                                const FractionalSolution& sol,
                                const ClusterSet& cs, const Lp2State& state) {
  std::vector<double> w(inst.num_facilities(), 0.0);
  for (int k = 0; k < cs.num_clusters(); ++k) {
    const auto& c = cs.clusters[k];
    for (int i : state.T[k]) {
      w[i] = c.dense() ? cs.load[i] / inst.capacity() : sol.xij(i, c.center);
    }
  }
  return w;
}

double lp2_violation(const Lp2State& s, const std::vector<double>& w) {
  double worst = 0.0;
  for (int i = 0; i < s.num_facilities; ++i) {
    worst = std::max({worst, -w[i], w[i] - 1.0});
    if (s.owner[i] < 0) worst = std::max(worst, std::abs(w[i]));
  }
  for (size_t k = 0; k < s.T.size(); ++k) {
    const double sum = sum_over(s.T[k], w);
    if (s.sparse[k]) {
      worst = std::max(worst, sum - 1.0);
    } else {
      worst = std::max(worst, static_cast<double>(s.dense_floor[k]) - sum);
    }
  }
  for (const auto& g : s.groups) {
    if (g.requirement <= 0) continue;
    double sum = 0.0;
    for (int k : g.clusters) sum += sum_over(s.T[k], w);
    worst = std::max(worst, static_cast<double>(g.requirement) - sum);
  }
  if (s.has_budget) {
    double spent = 0.0;
    for (int i = 0; i < s.num_facilities; ++i) spent += s.fcost[i] * w[i];
    worst = std::max(worst, spent - s.budget);
  }
  if (s.has_cardinality) {
    const double used = std::accumulate(w.begin(), w.end(), 0.0);
    worst = std::max(worst, used - static_cast<double>(s.cardinality));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Iterative rounding

PseudoIntegral iterative_round(const Lp2State& s, CheckLog& log) {
  const int n = s.num_facilities;
  const int K = static_cast<int>(s.T.size());
  PseudoIntegral out;
  out.w.assign(n, 0.0);
  std::vector<bool> active(n, false), one(n, false);
  for (int i = 0; i < n; ++i) active[i] = s.owner[i] >= 0;
  std::vector<std::vector<int>> sets;
  std::vector<long> req;
  initial_groups(s, sets, req);
  std::vector<bool> retired(K, false);

  while (true) {
    const int num_active = static_cast<int>(std::count(active.begin(), active.end(), true));
    if (num_active == 0) break;
    ResidualModel rm = residual_model(s, active, one, sets, req);
    LpSolution sol;
    try {
      sol = solve_extreme(rm.lp);
    } catch (const LpInfeasible&) {
      throw InfeasibleError("opening LP is infeasible");
    }
    log.require("opening LP solution is an extreme point",
                is_extreme_point(rm.lp, sol.x),
                [&] { return fmt("iteration=%zu", out.history.size()); });
    IterationRecord rec;
    rec.active = num_active;
    for (size_t v = 0; v < rm.facility.size(); ++v) {
      const int i = rm.facility[v];
      const double x = sol.x[v];
      if (x <= kSnapTol) {
        out.w[i] = 0.0;
        active[i] = false;
        ++rec.fixed_zero;
      } else if (x >= 1.0 - kSnapTol) {
        out.w[i] = 1.0;
        active[i] = false;
        one[i] = true;
        out.opened.push_back(i);
        ++rec.fixed_one;
      } else {
        out.w[i] = x;
        ++rec.fractional;
      }
    }
    for (int k = 0; k < K; ++k) {
      if (retired[k]) continue;
      const int g = s.group_of_cluster[k];
      if (g < 0) continue;
      const double sum = sum_over(s.T[k], out.w);
      const double target = s.sparse[k] ? 1.0 : static_cast<double>(s.dense_floor[k]);
      if (std::abs(sum - target) > kTight) continue;
      retired[k] = true;
      ++rec.retired;
      auto& set = sets[g];
      set.erase(std::remove(set.begin(), set.end(), k), set.end());
      req[g] = std::max(0L, req[g] - (s.sparse[k] ? 1L : s.dense_floor[k]));
    }
    rec.cost = s.cost(out.w);
    if (!out.history.empty()) {
      log.leq("opening LP cost non-increasing", rec.cost, out.history.back().cost,
              [&] { return fmt("iteration=%zu", out.history.size()); },
              Severity::kBound, 1e-7);
    }
    out.history.push_back(rec);
    if (rec.fixed_zero == 0 && rec.fixed_one == 0) break;
  }
  for (int i = 0; i < n; ++i) {
    if (out.w[i] > kSnapTol && out.w[i] < 1.0 - kSnapTol) out.fractional.push_back(i);
  }
  out.cost = s.cost(out.w);
  log.leq("fractional facilities after rounding",
          static_cast<double>(out.fractional.size()), 2.0,
          [&] { return fmt("count=%zu", out.fractional.size()); });
  if (s.has_budget) {
    double spent = 0.0;
    for (int i = 0; i < n; ++i) spent += s.fcost[i] * out.w[i];
    log.leq("pseudo-integral budget", spent, s.budget);
  }
  if (s.has_cardinality) {
    log.leq("pseudo-integral cardinality", std::accumulate(out.w.begin(), out.w.end(), 0.0),
            static_cast<double>(s.cardinality));
  }
  return out;
}

std::vector<bool> open_integral(const PseudoIntegral& p, OpenMode mode,
                                CheckLog& log) {
  const int n = static_cast<int>(p.w.size());
  std::vector<bool> open(n, false);
  for (int i = 0; i < n; ++i) open[i] = p.w[i] >= 1.0 - kSnapTol;
  if (p.fractional.empty()) return open;
  if (mode == OpenMode::kBoth) {
    if (p.fractional.size() == 2) {
      const double sum = p.w[p.fractional[0]] + p.w[p.fractional[1]];
      log.hard_require("fractional pair sums to one", std::abs(sum - 1.0) <= 1e-7,
                       [&] {
                         return fmt("i1=%d i2=%d sum=%.12g", p.fractional[0],
                                    p.fractional[1], sum);
                       });
    }
    for (int i : p.fractional) open[i] = true;
  } else {
    int best = p.fractional[0];
    for (int i : p.fractional) {
      if (p.w[i] > p.w[best]) best = i;
    }
    open[best] = true;
  }
  return open;
}

// ---------------------------------------------------------------------------
// Routing

RoutedDemand route_demands(const Instance& inst, const ClusterSet& cs,
                           const Hierarchy& h, const std::vector<bool>& open,
                           double factor, CheckLog& log) {
  const int n = inst.num_facilities();
  const int K = cs.num_clusters();
  const double u = inst.capacity();
  const double cap = factor * u;
  const auto& f = h.forest;
  RoutedDemand rd;
  rd.served.assign(K, {});
  rd.g.assign(n, 0.0);
  rd.theta.assign(K, {});
  rd.spill.assign(h.mcs.size(), 0.0);
  rd.facility_less.assign(h.mcs.size(), 0);

  std::vector<std::vector<int>> opened(K);
  for (int k = 0; k < K; ++k) {
    for (int i : cs.clusters[k].facilities) {
      if (open[i]) opened[k].push_back(i);
    }
  }
  auto center_dist = [&](int a, int b) {
    return inst.cc(cs.clusters[a].center, cs.clusters[b].center);
  };
  using Sources = std::vector<std::pair<int, double>>;
  // Splits every source over `facs` in proportion to their residual capacity.
  auto distribute = [&](const Sources& sources, const std::vector<int>& facs) {
    std::vector<double> weight(facs.size(), 0.0);
    double total = 0.0;
    for (size_t t = 0; t < facs.size(); ++t) {
      weight[t] = std::max(0.0, cap - rd.g[facs[t]]);
      total += weight[t];
    }
    if (total <= 1e-12) {
      std::fill(weight.begin(), weight.end(), 1.0);
      total = static_cast<double>(facs.size());
    }
    for (const auto& [k, a] : sources) {
      for (size_t t = 0; t < facs.size(); ++t) {
        const double part = a * weight[t] / total;
        rd.served[k].push_back({facs[t], part});
        rd.g[facs[t]] += part;
      }
    }
  };
  auto nearest_with_facilities = [&](int k, const std::vector<int>& pool) {
    int best = -1;
    for (int v : pool) {
      if (opened[v].empty()) continue;
      if (best < 0 || std::make_pair(center_dist(k, v), f.id[v]) <
                          std::make_pair(center_dist(k, best), f.id[best])) {
        best = v;
      }
    }
    return best;
  };
  std::vector<int> all_clusters(K);
  std::iota(all_clusters.begin(), all_clusters.end(), 0);

  std::vector<Sources> incoming(h.mcs.size());
  for (int r = static_cast<int>(h.mcs.size()) - 1; r >= 0; --r) {
    const auto& mc = h.mcs[r];
    int facility_less = 0;
    bool only_sparse = true;
    for (int k : mc.members) {
      if (!opened[k].empty()) continue;
      ++facility_less;
      if (cs.clusters[k].dense()) only_sparse = false;
    }
    rd.facility_less[r] = facility_less;
    auto mcw = [&] { return fmt("mc root=%d", f.id[mc.root]); };
    log.leq("facility-less clusters per meta-cluster", facility_less, 2.0, mcw);
    log.require("facility-less clusters are sparse", only_sparse, mcw);

    for (int k : mc.members) {
      const auto& O = opened[k];
      for (int i : O) {
        const double part = cs.clusters[k].demand / static_cast<double>(O.size());
        rd.served[k].push_back({i, part});
        rd.g[i] += part;
      }
    }
    Sources spill;
    for (int k : mc.members) {
      if (!opened[k].empty()) continue;
      const double d = cs.clusters[k].demand;
      int v = f.sigma[k];
      while (v >= 0 && h.mc_of[v] == r && opened[v].empty()) v = f.sigma[v];
      if (v >= 0 && h.mc_of[v] == r) {
        distribute({{k, d}}, opened[v]);
        log.leq("within meta-cluster travel at most twice the parent edge",
                d * center_dist(k, v), 2.0 * d * f.sigma_cost[k],
                [&] { return fmt("center=%d target=%d", f.id[k], f.id[v]); },
                Severity::kDiagnostic);
      } else if (!mc.is_root()) {
        spill.push_back({k, d});
      } else {
        int target = nearest_with_facilities(k, mc.members);
        log.require("root meta-cluster serves its own demand", target >= 0, mcw);
        if (target < 0) target = nearest_with_facilities(k, all_clusters);
        if (target < 0) throw InfeasibleError("no facility is open");
        distribute({{k, d}}, opened[target]);
      }
    }
    if (!incoming[r].empty()) {
      std::vector<int> facs;
      for (int k : mc.members) facs.insert(facs.end(), opened[k].begin(), opened[k].end());
      if (!facs.empty()) {
        distribute(incoming[r], facs);
      } else if (!mc.is_root()) {
        log.require("meta-cluster receiving demand has open facilities", false, mcw);
        spill.insert(spill.end(), incoming[r].begin(), incoming[r].end());
      } else {
        log.require("meta-cluster receiving demand has open facilities", false, mcw);
        for (const auto& src : incoming[r]) {
          const int target = nearest_with_facilities(src.first, all_clusters);
          if (target < 0) throw InfeasibleError("no facility is open");
          distribute({src}, opened[target]);
        }
      }
    }
    if (!spill.empty()) {
      double total = 0.0;
      for (const auto& s : spill) total += s.second;
      rd.spill[r] = total;
      log.leq("meta-cluster spill at most u", total, u, mcw);
      auto& dest = incoming[mc.parent_mc];
      dest.insert(dest.end(), spill.begin(), spill.end());
    }
  }

  double total_g = 0.0, total_d = 0.0;
  for (int i = 0; i < n; ++i) {
    total_g += rd.g[i];
    if (rd.g[i] > 0) {
      log.leq("facility load within capacity factor", rd.g[i] / u, factor,
              [&] { return fmt("facility=%d load=%.12g", i, rd.g[i]); },
              Severity::kBound, 1e-7);
    }
  }
  for (int k = 0; k < K; ++k) {
    const double d = cs.clusters[k].demand;
    total_d += d;
    std::map<int, double> per_center;
    double travel = 0.0;
    for (const auto& [i, a] : rd.served[k]) {
      const int owner = cs.cluster_of_facility[i];
      per_center[owner] += a;
      travel += a * center_dist(k, owner);
    }
    for (const auto& [c, a] : per_center) {
      if (d > 0) rd.theta[k].push_back({c, a / d});
    }
    log.leq("center travel within l parent edges", travel,
            h.l * d * f.sigma_cost[k],
            [&] { return fmt("center=%d", f.id[k]); });
  }
  log.leq("routed demand conserved", std::abs(total_g - total_d), 1e-7);
  return rd;
}

std::vector<double> assign_clients(const Instance& inst,
                                   const FractionalSolution& sol,
                                   const ClusterSet& cs,
                                   const RoutedDemand& routed,
                                   AssignmentCosts& costs) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const int K = cs.num_clusters();
  const auto mass = cluster_assignment_mass(inst, sol, cs);
  std::vector<double> xbar(static_cast<size_t>(n) * m, 0.0);
  costs = {};
  for (int k = 0; k < K; ++k) {
    const auto& c = cs.clusters[k];
    if (c.demand <= 0) continue;
    for (const auto& [i, a] : routed.served[k]) {
      const double scale = a / c.demand;
      for (int j = 0; j < m; ++j) {
        const double v = mass[static_cast<size_t>(j) * K + k];
        if (v != 0.0) xbar[static_cast<size_t>(i) * m + j] += scale * v;
      }
      const int owner_center = cs.clusters[cs.cluster_of_facility[i]].center;
      costs.travel += a * inst.cc(c.center, owner_center);
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < K; ++k) {
      costs.consolidation +=
          inst.cc(cs.clusters[k].center, j) * mass[static_cast<size_t>(j) * K + k];
    }
  }
  for (int i = 0; i < n; ++i) {
    const int owner_center = cs.clusters[cs.cluster_of_facility[i]].center;
    costs.delivery += routed.g[i] * inst.fc(i, owner_center);
    for (int j = 0; j < m; ++j) {
      costs.total += xbar[static_cast<size_t>(i) * m + j] * inst.fc(i, j);
    }
  }
  return xbar;
}

std::vector<int> integralize_assignment(const Instance& inst,
                                        const std::vector<double>& xbar,
                                        const std::vector<bool>& open,
                                        double& integral_cost) {
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  std::vector<long> capacity(n, 0);
  std::vector<double> cost(static_cast<size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    double load = 0.0;
    for (int j = 0; j < m; ++j) {
      load += xbar[static_cast<size_t>(i) * m + j];
      cost[static_cast<size_t>(i) * m + j] = inst.fc(i, j);
    }
    if (open[i]) capacity[i] = static_cast<long>(std::ceil(load - 1e-9));
  }
  const auto res = min_cost_assignment(capacity, m, cost);
  integral_cost = res.cost;
  return res.assignment;
}

// ---------------------------------------------------------------------------
// Pipeline

double sparse_sigma_cost(const Instance& inst, const FractionalSolution& sol,
                         const ClusterSet& cs, const CenterForest& forest) {
  double total = 0.0;
  for (int k = 0; k < cs.num_clusters(); ++k) {
    const auto& c = cs.clusters[k];
    if (c.dense()) continue;
    double near = 0.0, mass = 0.0;
    for (int i : c.facilities) {
      const double x = sol.xij(i, c.center);
      near += inst.fc(i, c.center) * x;
      mass += x;
    }
    total += c.demand * (near + forest.sigma_cost[k] * (1.0 - mass));
  }
  return total;
}

std::vector<MetaClusterSummary> summarize_mcs(const ClusterSet& cs,
                                              const Hierarchy& h,
                                              const std::vector<bool>& open,
                                              const RoutedDemand& routed) {
  std::vector<MetaClusterSummary> out;
  for (size_t r = 0; r < h.mcs.size(); ++r) {
    const auto& mc = h.mcs[r];
    MetaClusterSummary s;
    s.root_center = cs.clusters[mc.root].center;
    s.size = static_cast<int>(mc.members.size());
    s.gamma = mc.gamma;
    s.g2_requirement = mc.g2_requirement;
    s.beta = mc.beta;
    s.residual_case2 = mc.residual_case2;
    for (int k : mc.members) {
      for (int i : cs.clusters[k].facilities) s.opened += open[i] ? 1 : 0;
    }
    s.facility_less = routed.facility_less.empty() ? 0 : routed.facility_less[r];
    out.push_back(s);
  }
  return out;
}

MetaRun run_meta_pipeline(const Instance& inst, FractionalSolution sol, int l,
                          OpenMode mode, bool facility_costs) {
  MetaRun run;
  run.sol = std::move(sol);
  run.cs = make_clusters(inst, run.sol, l);
  check_clustering(inst, run.sol, run.cs, run.checks);
  run.h = build_hierarchy(inst, run.cs);
  check_hierarchy(inst, run.cs, run.h, run.checks);
  run.T = truncated_sets(inst, run.cs, run.h.forest);
  run.lp2 = build_lp2(inst, run.cs, run.h, run.T, facility_costs);
  run.rounded = iterative_round(run.lp2, run.checks);
  run.open = open_integral(run.rounded, mode, run.checks);

  for (int i = 0; i < inst.num_facilities(); ++i) {
    if (!run.open[i]) continue;
    run.checks.require("no facility opened outside the truncated sets",
                       run.lp2.owner[i] >= 0, [&] { return fmt("facility=%d", i); });
  }
  for (const auto& mc : run.h.mcs) {
    long opened = 0;
    for (int k : mc.members) {
      for (int i : run.cs.clusters[k].facilities) opened += run.open[i] ? 1 : 0;
    }
    run.checks.leq("meta-cluster openings at least beta", static_cast<double>(mc.beta),
                   static_cast<double>(opened),
                   [&] { return fmt("mc root=%d", run.cs.clusters[mc.root].center); },
                   mode == OpenMode::kBoth ? Severity::kBound : Severity::kDiagnostic);
  }
  run.routed = route_demands(inst, run.cs, run.h, run.open, capacity_factor(l),
                             run.checks);
  run.xbar = assign_clients(inst, run.sol, run.cs, run.routed, run.costs);

  const int m = inst.num_clients();
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < inst.num_facilities(); ++i) s += run.xbar[static_cast<size_t>(i) * m + j];
    run.checks.leq("client fully assigned", std::abs(s - 1.0), 1e-7,
                   [&] { return fmt("client=%d", j); });
  }
  for (int i = 0; i < inst.num_facilities(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += run.xbar[static_cast<size_t>(i) * m + j];
    run.checks.leq("assignment matches routed load", std::abs(s - run.routed.g[i]), 1e-7,
                   [&] { return fmt("facility=%d", i); });
    if (!run.open[i]) {
      run.checks.leq("assignment only to open facilities", s, 0.0,
                     [&] { return fmt("facility=%d", i); });
    }
  }
  return run;
}

void check_meta_costs(const Instance& inst, MetaRun& run, int l) {
  auto& log = run.checks;
  const double lp = run.sol.lp_opt;
  log.leq("sparse sigma-form cost", sparse_sigma_cost(inst, run.sol, run.cs, run.h.forest),
          12.0 * lp);
  log.leq("witness feasible for opening LP", lp2_violation(run.lp2, run.witness), 0.0,
          {}, Severity::kBound, 1e-7);
  log.leq("witness cost", run.witness_cost, (2.0 * l + 13.0) * lp);
  log.leq("rounded opening cost within witness cost", run.rounded.cost,
          run.witness_cost, {}, Severity::kBound, 1e-7);
  std::vector<double> w_hat(run.open.size());
  for (size_t i = 0; i < run.open.size(); ++i) w_hat[i] = run.open[i] ? 1.0 : 0.0;
  log.leq("integral opening cost within pseudo-integral cost", run.lp2.cost(w_hat),
          run.rounded.cost, {}, Severity::kDiagnostic, 1e-7);
  const double factor = capacity_factor(l);
  log.leq("consolidation cost", run.costs.consolidation, 2.0 * (l + 1) * lp);
  log.leq("cross meta-cluster travel cost", run.costs.travel,
          l * (2.0 * l + 13.0) * lp);
  log.leq("delivery cost", run.costs.delivery, factor * (2.0 * l + 13.0) * lp);
  log.leq("assignment cost within component sums", run.costs.total,
          run.costs.consolidation + run.costs.travel + run.costs.delivery, {},
          Severity::kBound, 1e-7);
}

namespace {

// Cheapest fractional purchase of max(1, m/u) units of opening.
double min_fractional_spend(std::vector<double> costs, double need) {
  std::sort(costs.begin(), costs.end());
  double spend = 0.0;
  for (double c : costs) {
    if (need <= 0) break;
    const double take = std::min(1.0, need);
    spend += take * c;
    need -= take;
  }
  return need > 1e-12 ? kInf : spend;
}

}  // namespace

RoundedSolution solve_ckm(const Instance& inst, const SolveOptions& opt) {
  if (inst.problem() != Problem::kCkm) throw UsageError("instance is not a ckm instance");
  if (!(opt.eps > 0)) throw UsageError("eps must be positive");
  const int l = l_from_eps(opt.eps);
  const int n = inst.num_facilities();
  const int m = inst.num_clients();
  const double u = inst.capacity();

  std::vector<double> guesses(inst.facility_costs());
  std::sort(guesses.begin(), guesses.end());
  guesses.erase(std::unique(guesses.begin(), guesses.end()), guesses.end());

  RoundedSolution best;
  bool have = false;
  std::vector<GuessRecord> records;
  CheckLog all_checks;
  for (double g : guesses) {
    GuessRecord rec;
    rec.fmax = g;
    std::vector<int> keep;
    std::vector<double> kept_costs;
    for (int i = 0; i < n; ++i) {
      if (inst.facility_cost(i) <= g) {
        keep.push_back(i);
        kept_costs.push_back(inst.facility_cost(i));
      }
    }
    const double need = std::max(1.0, m / u);
    if (min_fractional_spend(kept_costs, need) > inst.budget() + 1e-9) {
      rec.status = "skipped";
      records.push_back(rec);
      continue;
    }
    const Instance sub = inst.restrict_facilities(keep);
    MetaRun run;
    try {
      run = run_meta_pipeline(sub, solve_natural_lp(sub), l, OpenMode::kBoth, false);
    } catch (const BoundViolation&) {
      throw;
    } catch (const Error& e) {
      rec.status = e.what();
      records.push_back(rec);
      continue;
    }
    run.witness = lp2_witness(sub, run.sol, run.cs, run.lp2);
    run.witness_cost = run.lp2.cost(run.witness);
    check_meta_costs(sub, run, l);

    RoundedSolution rs;
    rs.problem = Problem::kCkm;
    rs.eps = opt.eps;
    rs.l = l;
    rs.assign = opt.assign;
    rs.n = n;
    rs.m = m;
    rs.capacity = inst.capacity();
    rs.budget_or_k = inst.budget();
    rs.fmax = g;
    rs.lp_opt = run.sol.lp_opt;
    rs.alpha = alpha_of_l(l);
    rs.cost_bound = rs.alpha * rs.lp_opt;
    rs.witness_cost = run.witness_cost;
    rs.frac_after_round = static_cast<int>(run.rounded.fractional.size());
    rs.iterations = run.rounded.history;
    rs.num_centers = run.cs.num_clusters();
    rs.mcs = summarize_mcs(run.cs, run.h, run.open, run.routed);
    rs.xbar.assign(static_cast<size_t>(n) * m, 0.0);
    for (size_t t = 0; t < keep.size(); ++t) {
      const int i = keep[t];
      if (run.open[t]) {
        rs.open.push_back(i);
        rs.budget_used += inst.facility_cost(i);
      }
      for (int j = 0; j < m; ++j) {
        rs.xbar[static_cast<size_t>(i) * m + j] = run.xbar[t * m + j];
      }
      rs.max_load_over_u = std::max(rs.max_load_over_u, run.routed.g[t] / u);
    }
    rs.cardinality_used = static_cast<int>(rs.open.size());
    rs.connection_cost = run.costs.total;
    rs.cost = rs.connection_cost;
    rs.checks = run.checks;
    if (opt.assign == AssignMode::kIntegral) {
      double icost = 0.0;
      const auto a = integralize_assignment(sub, run.xbar, run.open, icost);
      rs.integral.resize(m);
      std::vector<long> loads(n, 0);
      for (int j = 0; j < m; ++j) {
        rs.integral[j] = keep[a[j]];
        ++loads[rs.integral[j]];
      }
      rs.integral_connection_cost = icost;
      rs.max_integral_load = *std::max_element(loads.begin(), loads.end());
      rs.checks.leq("integral assignment cost within fractional cost", icost,
                    rs.connection_cost, {}, Severity::kBound, 1e-7);
      rs.cost = icost;
    }
    rec.status = "ok";
    rec.cost = rs.cost;
    records.push_back(rec);
    all_checks.merge(rs.checks);
    if (!have || rs.cost < best.cost) {
      best = std::move(rs);
      have = true;
    }
  }
  if (!have) throw InfeasibleError("no facility-cost guess admits a feasible relaxation");
  best.guesses = records;
  best.checks = all_checks;
  const double factor = capacity_factor(l);
  best.ok_budget = best.budget_used <= inst.budget() + best.fmax;
  best.ok_capacity = best.max_load_over_u <= factor + 1e-7;
  if (opt.assign == AssignMode::kIntegral) {
    best.ok_capacity = best.ok_capacity &&
                       best.max_integral_load <= static_cast<long>(std::ceil(factor * u - 1e-9));
  }
  best.ok_cost = leq_tol(best.connection_cost, best.cost_bound, 1e-7);
  return best;
}

}  // namespace capround
