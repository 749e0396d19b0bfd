#include <doctest.h>

#include <algorithm>

#include "capround/hierarchy.hpp"
#include "capround/relaxation.hpp"
#include "support.hpp"

using namespace capround;

namespace {

// Chain 0 <- 1 <- ... <- (K-1) with weights growing downward.
CenterForest chain_forest(int K) {
  CenterForest f;
  f.id.resize(K);
  f.eta.resize(K);
  f.tree_parent.resize(K);
  f.sigma.resize(K);
  f.first_child.assign(K, -1);
  f.next_child.assign(K, -1);
  f.sigma_cost.resize(K);
  f.weight.resize(K);
  f.depth.resize(K);
  f.lone_sparse_root.assign(K, false);
  for (int k = 0; k < K; ++k) {
    f.id[k] = k;
    f.eta[k] = k == 0 ? 1 : k - 1;
    f.tree_parent[k] = f.sigma[k] = k - 1;
    if (k + 1 < K) f.first_child[k] = k + 1;
    f.weight[k] = f.sigma_cost[k] = 1.0 + k;
    f.depth[k] = k;
  }
  f.roots = {0};
  return f;
}

// Groups built straight from the σ parent map.
std::vector<std::vector<int>> reference_groups(const CenterForest& f, int l) {
  const int K = f.size();
  std::vector<int> depth(K, 0);
  for (int k = 0; k < K; ++k) {
    for (int v = f.sigma[k]; v >= 0; v = f.sigma[v]) ++depth[k];
  }
  std::vector<int> group(K, -1);
  std::vector<std::vector<int>> out;
  while (true) {
    int r = -1;
    for (int k = 0; k < K; ++k) {
      if (group[k] >= 0) continue;
      if (r < 0 || std::make_pair(depth[k], f.id[k]) < std::make_pair(depth[r], f.id[r])) r = k;
    }
    if (r < 0) break;
    std::vector<int> g{r};
    group[r] = static_cast<int>(out.size());
    while (static_cast<int>(g.size()) < l) {
      int best = -1;
      for (int k = 0; k < K; ++k) {
        if (group[k] >= 0 || f.sigma[k] < 0) continue;
        if (std::find(g.begin(), g.end(), f.sigma[k]) == g.end()) continue;
        if (best < 0 || std::make_pair(f.weight[k], f.id[k]) <
                            std::make_pair(f.weight[best], f.id[best])) {
          best = k;
        }
      }
      if (best < 0) break;
      g.push_back(best);
      group[best] = group[r];
    }
    out.push_back(g);
  }
  return out;
}

ClusterSet demand_clusters(const std::vector<double>& demand, int u) {
  ClusterSet cs;
  for (size_t k = 0; k < demand.size(); ++k) {
    Cluster c;
    c.center = static_cast<int>(k);
    c.demand = demand[k];
    c.kind = demand[k] >= u ? ClusterKind::kDense : ClusterKind::kSparse;
    cs.clusters.push_back(c);
    cs.centers.push_back(static_cast<int>(k));
  }
  return cs;
}

MetaCluster mc_of(std::vector<int> members) {
  MetaCluster mc;
  mc.root = members.front();
  mc.members = std::move(members);
  return mc;
}

}  // namespace

TEST_CASE("single sparse center forms a one-node forest") {
  Instance inst = testsupport::line_instance(Problem::kCkm, {1}, {0}, {0}, 5);
  inst.set_budget(1);
  const FractionalSolution sol = solve_natural_lp(inst);
  const ClusterSet cs = make_clusters(inst, sol, 5);
  const CenterForest f = build_forest(inst, cs);
  REQUIRE(f.size() == 1);
  CHECK(f.sigma[0] == -1);
  CHECK(f.sigma_cost[0] == 0.0);
  CHECK(f.lone_sparse_root[0]);
  std::vector<int> mc_index;
  const auto mcs = form_meta_clusters(f, 5, mc_index);
  REQUIRE(mcs.size() == 1);
  CHECK(mcs[0].members.size() == 1);
  CHECK(mcs[0].connect_cost == 0.0);
}

TEST_CASE("two sparse centers break their 2-cycle") {
  Instance inst =
      testsupport::line_instance(Problem::kCkm, {1, 1}, {0, 100}, {0, 100}, 5);
  inst.set_budget(2);
  const FractionalSolution sol = solve_natural_lp(inst);
  const ClusterSet cs = make_clusters(inst, sol, 2);
  REQUIRE(cs.num_clusters() == 2);
  const CenterForest f = build_forest(inst, cs);
  CHECK(f.removed_cycle_edges.size() == 1);
  CHECK(f.roots.size() == 1);
  const int root = f.roots[0];
  CHECK(f.id[root] == std::min(f.id[0], f.id[1]));
  CHECK(f.depth[1 - root] == 1);
  CHECK(f.sigma_cost[root] == doctest::Approx(100.0));
}

TEST_CASE("chain of l nodes is one meta-cluster") {
  const CenterForest f = chain_forest(5);
  std::vector<int> mc_index;
  const auto mcs = form_meta_clusters(f, 5, mc_index);
  REQUIRE(mcs.size() == 1);
  CHECK(mcs[0].members == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(mcs[0].is_root());
}

TEST_CASE("longer chain splits into full meta-clusters") {
  const CenterForest f = chain_forest(12);
  std::vector<int> mc_index;
  const auto mcs = form_meta_clusters(f, 5, mc_index);
  REQUIRE(mcs.size() == 3);
  CHECK(mcs[0].members.size() == 5);
  CHECK(mcs[1].members.size() == 5);
  CHECK(mcs[2].members.size() == 2);
  CHECK(mcs[1].parent_mc == 0);
  CHECK(mcs[1].connect_cost == doctest::Approx(6.0));
}

TEST_CASE("groups: exact multiple of u") {
  const ClusterSet cs = demand_clusters({4.0, 1.0}, 2);
  CenterForest f = chain_forest(2);
  MetaCluster mc = mc_of({0, 1});
  partition_groups(mc, cs, f, 2, 0.5);
  CHECK(mc.gamma == 2);
  CHECK_FALSE(mc.residual_case2);
  CHECK(mc.g2 == std::vector<int>{1});
  CHECK(mc.g2_requirement == 0);
}

TEST_CASE("groups: large residual pulls in the first sparse member") {
  const ClusterSet cs = demand_clusters({19.0, 3.0}, 10);
  CenterForest f = chain_forest(2);
  MetaCluster mc = mc_of({0, 1});
  partition_groups(mc, cs, f, 10, 0.5);
  CHECK(mc.residual == doctest::Approx(0.9));
  CHECK(mc.residual_case2);
  CHECK(mc.g1 == std::vector<int>{0, 1});
  CHECK(mc.gamma == 2);
  CHECK(mc.q_prime == 0);
  CHECK(mc.in_m1);
  CHECK(mc.beta == 2);
}

TEST_CASE("groups: large residual without sparse members") {
  const ClusterSet cs = demand_clusters({19.0}, 10);
  CenterForest f = chain_forest(1);
  MetaCluster mc = mc_of({0});
  partition_groups(mc, cs, f, 10, 0.5);
  CHECK(mc.residual_case2);
  CHECK(mc.gamma == 1);
}

TEST_CASE("groups: all-sparse meta-cluster") {
  const ClusterSet cs = demand_clusters({1, 1, 1, 1, 1}, 3);
  CenterForest f = chain_forest(5);
  MetaCluster mc = mc_of({0, 1, 2, 3, 4});
  partition_groups(mc, cs, f, 3, 0.5);
  CHECK(mc.gamma == 0);
  CHECK(mc.g1.empty());
  CHECK(mc.q_prime == 5);
  CHECK(mc.g2_requirement == 4);
  CHECK(mc.beta == 4);
}

TEST_CASE("forest and meta-cluster invariants on random pipelines") {
  int multi = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto gp = testsupport::clustered(12, 24, 10, seed);
    gp.blobs = 12;
    const Instance inst = generate(gp);
    const FractionalSolution sol = solve_natural_lp(inst);
    for (int l : {2, 5}) {
      const ClusterSet cs = make_clusters(inst, sol, l);
      const Hierarchy h = build_hierarchy(inst, cs);
      CheckLog log;
      check_hierarchy(inst, cs, h, log);
      CHECK(log.all_bounds_hold());
      const auto& f = h.forest;
      for (int k = 0; k < f.size(); ++k) {
        if (f.sigma[k] >= 0 && f.eta[k] >= 0 && f.eta[k] != k) {
          CHECK(f.sigma_cost[k] <= 2.0 * inst.cc(f.id[k], f.id[f.eta[k]]) + 1e-9);
        }
      }
      const auto ref = reference_groups(f, l);
      REQUIRE(ref.size() == h.mcs.size());
      for (size_t r = 0; r < ref.size(); ++r) CHECK(ref[r] == h.mcs[r].members);
      for (const auto& mc : h.mcs) {
        if (!mc.child_mcs.empty()) CHECK(static_cast<int>(mc.members.size()) == l);
        CHECK(static_cast<int>(mc.members.size()) <= l);
        int dense = 0;
        for (int v : mc.members) dense += cs.clusters[v].dense() ? 1 : 0;
        CHECK(dense <= 1);
        if (dense == 1) CHECK(cs.clusters[mc.root].dense());
        if (mc.members.size() > 1) ++multi;
      }
      const auto T = truncated_sets(inst, cs, f);
      for (int k = 0; k < cs.num_clusters(); ++k) {
        const auto& c = cs.clusters[k];
        CHECK(std::includes(c.facilities.begin(), c.facilities.end(), T[k].begin(),
                            T[k].end()));
        if (!c.dense()) {
          CHECK(std::includes(T[k].begin(), T[k].end(), c.ball.begin(), c.ball.end()));
        }
      }
    }
  }
  CHECK(multi > 0);
}

TEST_CASE("hierarchy dump is a digraph") {
  const Instance inst = testsupport::tiny_a();
  const ClusterSet cs = make_clusters(inst, solve_natural_lp(inst), 5);
  const std::string dot = hierarchy_dot(cs, build_hierarchy(inst, cs));
  CHECK(dot.rfind("digraph", 0) == 0);
}
