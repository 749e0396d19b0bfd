#include <doctest.h>

#include <algorithm>

#include "capround/ckm.hpp"
#include "capround/oracle.hpp"
#include "support.hpp"

using namespace capround;

namespace {

Lp2State two_facility_state(std::vector<double> coef, double budget) {
  Lp2State s;
  s.num_facilities = 2;
  s.T = {{0}, {1}};
  s.owner = {0, 1};
  s.sparse = {true, true};
  s.dense_floor = {0, 0};
  s.groups = {Lp2Group{0, false, {0, 1}, 1}};
  s.group_of_cluster = {0, 0};
  s.coef = std::move(coef);
  s.fcost = {3.0, 5.0};
  s.has_budget = true;
  s.budget = budget;
  return s;
}

PseudoIntegral pseudo(std::vector<double> w) {
  PseudoIntegral p;
  p.w = std::move(w);
  for (int i = 0; i < static_cast<int>(p.w.size()); ++i) {
    if (p.w[i] > kSnapTol && p.w[i] < 1.0 - kSnapTol) p.fractional.push_back(i);
    if (p.w[i] >= 1.0 - kSnapTol) p.opened.push_back(i);
  }
  return p;
}

Instance many_clusters(std::uint64_t seed) {
  auto gp = testsupport::clustered(12, 24, 10, seed);
  gp.blobs = 12;
  return generate(gp);
}

}  // namespace

TEST_CASE("parameters derived from eps") {
  CHECK(l_from_eps(1.0) == 5);
  CHECK(l_from_eps(0.5) == 9);
  CHECK(l_from_eps(0.25) == 17);
  CHECK(l_from_eps(10.0) == 2);
  CHECK(capacity_factor(5) == doctest::Approx(3.0));
  CHECK(alpha_of_l(5) == doctest::Approx(196.0));
  CHECK(alpha_of_l(9) == doctest::Approx(376.5));
}

TEST_CASE("opening with no fractional facility keeps the point") {
  CheckLog log;
  const auto open = open_integral(pseudo({1.0, 0.0, 1.0}), OpenMode::kBoth, log);
  CHECK(open == std::vector<bool>{true, false, true});
}

TEST_CASE("fractional pair opens both within one extra facility cost") {
  CheckLog log;
  const PseudoIntegral p = pseudo({0.4, 0.6});
  const auto open = open_integral(p, OpenMode::kBoth, log);
  CHECK(open == std::vector<bool>{true, true});
  const std::vector<double> f{3.0, 5.0};
  const double before = f[0] * p.w[0] + f[1] * p.w[1];
  CHECK(f[0] + f[1] - before <= 5.0);
}

TEST_CASE("larger mode opens only the larger share") {
  CheckLog log;
  CHECK(open_integral(pseudo({0.4, 0.6}), OpenMode::kLarger, log) ==
        std::vector<bool>{false, true});
  CHECK(open_integral(pseudo({0.5, 0.5}), OpenMode::kLarger, log) ==
        std::vector<bool>{true, false});
}

TEST_CASE("fractional pair off one is a hard failure") {
  CheckLog log;
  CHECK_THROWS_AS(open_integral(pseudo({0.4, 0.5}), OpenMode::kBoth, log), BoundViolation);
}

TEST_CASE("iterative rounding stops at a pair summing to one") {
  const Lp2State s = two_facility_state({1.0, 0.0}, 4.0);
  CheckLog log;
  const PseudoIntegral p = iterative_round(s, log);
  REQUIRE(p.fractional.size() == 2);
  CHECK(p.w[0] + p.w[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(p.w[0] == doctest::Approx(0.5));
  CHECK(3.0 * p.w[0] + 5.0 * p.w[1] <= 4.0 + 1e-9);
}

TEST_CASE("iterative rounding of an integral optimum finishes in one pass") {
  const Lp2State s = two_facility_state({0.0, 1.0}, 4.0);
  CheckLog log;
  const PseudoIntegral p = iterative_round(s, log);
  CHECK(p.fractional.empty());
  CHECK(p.opened == std::vector<int>{0});
}

TEST_CASE("opening LP for one dense cluster of demand 3u") {
  Instance inst = testsupport::line_instance(Problem::kCkm, {1, 1, 1}, {0, 1, 2},
                                             {0, 0, 0, 0, 0, 0}, 2);
  inst.set_budget(3);
  const MetaRun run =
      run_meta_pipeline(inst, solve_natural_lp(inst), 5, OpenMode::kBoth, false);
  REQUIRE(run.cs.num_clusters() == 1);
  CHECK(run.cs.clusters[0].dense());
  CHECK(run.lp2.dense_floor[0] == 3);
  const LpModel m = run.lp2.full_model();
  for (const auto& row : m.rows()) {
    const bool cover = row.sense == Sense::kGe && row.rhs == 3.0 && row.terms.size() == 3;
    const bool budget = row.sense == Sense::kLe && row.rhs == doctest::Approx(3.0);
    CHECK((cover || budget));
  }
  CHECK(run.open == std::vector<bool>{true, true, true});
  for (double g : run.routed.g) CHECK(g == doctest::Approx(2.0));
}

TEST_CASE("lone sparse cluster keeps one opening") {
  Instance inst = testsupport::line_instance(Problem::kCkm, {1, 2}, {0, 3}, {0, 1}, 5);
  inst.set_budget(2);
  const MetaRun run =
      run_meta_pipeline(inst, solve_natural_lp(inst), 5, OpenMode::kBoth, false);
  REQUIRE(run.cs.num_clusters() == 1);
  CHECK_FALSE(run.cs.clusters[0].dense());
  CHECK(run.h.forest.lone_sparse_root[0]);
  const int opened = static_cast<int>(std::count(run.open.begin(), run.open.end(), true));
  CHECK(opened >= 1);
}

TEST_CASE("dense cluster of demand 2u serves itself") {
  Instance inst = testsupport::line_instance(Problem::kCkm, {1, 1}, {0, 1}, {0, 0, 0, 0}, 2);
  inst.set_budget(2);
  const MetaRun run =
      run_meta_pipeline(inst, solve_natural_lp(inst), 5, OpenMode::kBoth, false);
  REQUIRE(run.cs.num_clusters() == 1);
  CHECK(run.routed.g[0] == doctest::Approx(2.0));
  CHECK(run.routed.g[1] == doctest::Approx(2.0));
  REQUIRE(run.routed.theta[0].size() == 1);
  CHECK(run.routed.theta[0][0].first == 0);
}

TEST_CASE("tiny line instance witness is feasible for the opening LP") {
  const Instance inst = testsupport::tiny_a();
  const FractionalSolution sol = solve_natural_lp(inst);
  const MetaRun run = run_meta_pipeline(inst, sol, 5, OpenMode::kBoth, false);
  CHECK(lp2_violation(run.lp2, lp2_witness(inst, sol, run.cs, run.lp2)) <= 1e-9);
  CHECK(run.witness_cost <= (2 * 5 + 13) * sol.lp_opt + 1e-9);
  for (int i = 0; i < inst.num_facilities(); ++i) {
    double s = 0.0;
    for (int j = 0; j < inst.num_clients(); ++j) s += run.xbar[i * inst.num_clients() + j];
    CHECK(s == doctest::Approx(run.routed.g[i]).epsilon(1e-9));
  }
}

TEST_CASE("single open facility takes every client") {
  Instance inst = testsupport::line_instance(Problem::kCkm, {1, 1}, {0, 50}, {0, 1, 2}, 3);
  inst.set_budget(1);
  const FractionalSolution sol = solve_natural_lp(inst);
  const MetaRun run = run_meta_pipeline(inst, sol, 5, OpenMode::kBoth, false);
  const std::vector<bool> open{true, false};
  CheckLog log;
  const RoutedDemand rd = route_demands(inst, run.cs, run.h, open, 3.0, log);
  AssignmentCosts costs;
  const auto xbar = assign_clients(inst, sol, run.cs, rd, costs);
  for (int j = 0; j < 3; ++j) CHECK(xbar[j] == doctest::Approx(1.0));
  CHECK(costs.total == doctest::Approx(3.0));
}

TEST_CASE("routing with facility-less clusters conserves demand") {
  int exercised = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = many_clusters(seed);
    const FractionalSolution sol = solve_natural_lp(inst);
    const MetaRun run = run_meta_pipeline(inst, sol, 5, OpenMode::kBoth, false);
    const int K = run.cs.num_clusters();
    if (K < 3) continue;
    // Close every sparse non-root cluster of each meta-cluster except its
    // first two facility-bearing members.
    std::vector<bool> open = run.open;
    bool closed_any = false;
    for (const auto& mc : run.h.mcs) {
      int closed = 0;
      for (int k : mc.members) {
        if (k == mc.root || run.cs.clusters[k].dense() || closed == 2) continue;
        bool had = false;
        for (int i : run.cs.clusters[k].facilities) {
          had = had || open[i];
          open[i] = false;
        }
        if (had) {
          ++closed;
          closed_any = true;
        }
      }
    }
    if (!closed_any) continue;
    bool root_open = false;
    for (const auto& mc : run.h.mcs) {
      if (!mc.is_root()) continue;
      for (int i : run.cs.clusters[mc.root].facilities) root_open = root_open || open[i];
    }
    if (!root_open) continue;
    ++exercised;
    CheckLog log;
    const RoutedDemand rd = route_demands(inst, run.cs, run.h, open, 1e9, log);
    double total = 0.0;
    for (int i = 0; i < inst.num_facilities(); ++i) {
      total += rd.g[i];
      if (rd.g[i] > 0) CHECK(open[i]);
    }
    CHECK(total == doctest::Approx(inst.num_clients()));
    for (int k = 0; k < K; ++k) {
      double share = 0.0;
      for (const auto& t : rd.theta[k]) share += t.second;
      if (run.cs.clusters[k].demand > 0) CHECK(share == doctest::Approx(1.0));
    }
    CHECK(log.passed("routed demand conserved"));
    AssignmentCosts costs;
    const auto xbar = assign_clients(inst, sol, run.cs, rd, costs);
    for (int j = 0; j < inst.num_clients(); ++j) {
      double s = 0.0;
      for (int i = 0; i < inst.num_facilities(); ++i) s += xbar[i * inst.num_clients() + j];
      CHECK(s == doctest::Approx(1.0));
    }
  }
  CHECK(exercised > 0);
}

TEST_CASE("integral assignment matches enumeration") {
  const Instance inst =
      testsupport::line_instance(Problem::kCkm, {1, 1}, {0, 10}, {1, 4, 9}, 2);
  // Loads (2, 1) with clients 1 and 2 split.
  const std::vector<double> xbar{1.0, 0.5, 0.5, 0.0, 0.5, 0.5};
  double frac = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) frac += xbar[i * 3 + j] * inst.fc(i, j);
  }
  double cost = 0.0;
  const auto a = integralize_assignment(inst, xbar, {true, true}, cost);
  std::vector<double> c(6);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) c[i * 3 + j] = inst.fc(i, j);
  }
  CHECK(cost == doctest::Approx(testsupport::brute_force_assignment({2, 1}, 3, c)));
  CHECK(cost <= frac + 1e-9);
  CHECK(std::count(a.begin(), a.end(), 1) <= 1);
}

TEST_CASE("co-located assignment integralizes at zero cost") {
  const Instance inst = testsupport::line_instance(Problem::kCkm, {1, 1}, {0, 5}, {0, 0, 5}, 2);
  const std::vector<double> xbar{1.0, 0.5, 0.0, 0.0, 0.5, 1.0};
  double cost = -1.0;
  integralize_assignment(inst, xbar, {true, true}, cost);
  CHECK(cost == 0.0);
}

TEST_CASE("uniform facility costs need a single guess") {
  GenParams gp = testsupport::clustered(6, 12, 3, 5);
  gp.cost_min = gp.cost_max = 4;
  const Instance inst = generate(gp);
  const RoundedSolution s = solve_ckm(inst, {1.0, AssignMode::kFractional});
  CHECK(s.guesses.size() == 1);
  CHECK(s.verdict());
}

TEST_CASE("tiny line instance knapsack median") {
  const Instance inst = testsupport::tiny_a();
  const RoundedSolution s = solve_ckm(inst, {1.0, AssignMode::kIntegral});
  const ExactResult opt = exact_ckm(inst);
  CHECK(s.l == 5);
  CHECK(s.ok_budget);
  CHECK(s.budget_used <= inst.budget() + s.fmax);
  CHECK(s.connection_cost <= 196.0 * s.lp_opt + 1e-9);
  CHECK(opt.cost >= s.lp_opt - 1e-9);
  CHECK(s.max_integral_load <= 6);
  CHECK(s.verdict());
}

TEST_CASE("no affordable covering set is infeasible") {
  Instance inst = testsupport::line_instance(Problem::kCkm, {1, 1}, {0, 1}, {0, 1, 2}, 1);
  inst.set_budget(2);
  CHECK_THROWS_AS(solve_ckm(inst, {1.0, AssignMode::kFractional}), InfeasibleError);
  inst.set_budget(0.5);
  CHECK_THROWS_AS(solve_ckm(inst, {1.0, AssignMode::kFractional}), InfeasibleError);
}

TEST_CASE("random knapsack median runs satisfy every bound") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = many_clusters(seed);
    for (double eps : {1.0, 0.5}) {
      const RoundedSolution s = solve_ckm(inst, {eps, AssignMode::kIntegral});
      INFO("seed ", seed, " eps ", eps);
      CHECK(s.verdict());
      CHECK(s.frac_after_round <= 2);
      CHECK(s.budget_used <= inst.budget() + s.fmax);
      CHECK(s.max_load_over_u <= capacity_factor(s.l) + 1e-7);
      CHECK(s.max_integral_load <= static_cast<long>(std::ceil(capacity_factor(s.l) * inst.capacity() - 1e-9)));
      CHECK(s.connection_cost <= alpha_of_l(s.l) * s.lp_opt + 1e-7);
      CHECK(s.integral_connection_cost <= s.connection_cost + 1e-7);
      const int m = inst.num_clients();
      for (int j = 0; j < m; ++j) {
        double total = 0.0;
        for (int i = 0; i < inst.num_facilities(); ++i) {
          const double v = s.xbar[static_cast<size_t>(i) * m + j];
          total += v;
          if (v > 1e-12) CHECK(std::find(s.open.begin(), s.open.end(), i) != s.open.end());
        }
        CHECK(total == doctest::Approx(1.0));
      }
    }
  }
}
