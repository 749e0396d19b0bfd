#include "capround/hierarchy.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <tuple>

namespace capround {

std::vector<int> CenterForest::children(int v) const {
  std::vector<int> out;
  if (first_child[v] >= 0) out.push_back(first_child[v]);
  if (next_child[v] >= 0) out.push_back(next_child[v]);
  return out;
}

CenterForest build_forest(const Instance& inst, const ClusterSet& cs) {
  const int K = cs.num_clusters();
  if (K == 0) throw Error("forest needs at least one center");
  CenterForest f;
  f.id = cs.centers;
  f.eta.assign(K, -1);
  f.tree_parent.assign(K, -1);
  f.sigma.assign(K, -1);
  f.first_child.assign(K, -1);
  f.next_child.assign(K, -1);
  f.sigma_cost.assign(K, 0.0);
  f.weight.assign(K, 0.0);
  f.depth.assign(K, 0);
  f.lone_sparse_root.assign(K, false);
  auto dist = [&](int a, int b) { return inst.cc(f.id[a], f.id[b]); };

  for (int k = 0; k < K; ++k) {
    if (cs.clusters[k].dense()) {
      f.eta[k] = k;
      continue;
    }
    int best = -1;
    for (int o = 0; o < K; ++o) {
      if (o == k) continue;
      if (best < 0 || std::make_pair(dist(k, o), f.id[o]) <
                          std::make_pair(dist(k, best), f.id[best])) {
        best = o;
      }
    }
    f.eta[k] = best;
    if (best < 0) f.lone_sparse_root[k] = true;
  }
  for (int k = 0; k < K; ++k) {
    const int e = f.eta[k];
    if (e < 0 || e == k) continue;
    if (f.eta[e] == k && f.id[k] < f.id[e]) {
      f.removed_cycle_edges.push_back({k, e});
      continue;
    }
    f.tree_parent[k] = e;
    f.weight[k] = dist(k, e);
  }
  for (int k = 0; k < K; ++k) {
    if (f.tree_parent[k] < 0) {
      f.roots.push_back(k);
      if (f.eta[k] >= 0 && f.eta[k] != k) f.weight[k] = dist(k, f.eta[k]);
    }
  }
  // Any cycle longer than two would leave nodes unreachable from a root.
  std::vector<std::vector<int>> kids(K);
  for (int k = 0; k < K; ++k) {
    if (f.tree_parent[k] >= 0) kids[f.tree_parent[k]].push_back(k);
  }
  for (int v = 0; v < K; ++v) {
    auto& c = kids[v];
    std::sort(c.begin(), c.end(), [&](int a, int b) {
      return std::make_pair(dist(v, a), f.id[a]) < std::make_pair(dist(v, b), f.id[b]);
    });
    for (size_t t = 0; t < c.size(); ++t) {
      f.sigma[c[t]] = t == 0 ? v : c[t - 1];
      if (t == 0) {
        f.first_child[v] = c[t];
      } else {
        f.next_child[c[t - 1]] = c[t];
      }
    }
  }
  int reached = 0;
  std::queue<int> bfs;
  for (int r : f.roots) bfs.push(r);
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    ++reached;
    for (int c : f.children(v)) {
      f.depth[c] = f.depth[v] + 1;
      bfs.push(c);
    }
  }
  if (reached != K) throw Error("center graph contains a cycle longer than two");
  for (int k = 0; k < K; ++k) {
    if (f.sigma[k] >= 0) {
      f.sigma_cost[k] = dist(k, f.sigma[k]);
    } else if (f.eta[k] >= 0 && f.eta[k] != k) {
      f.sigma_cost[k] = dist(k, f.eta[k]);
    }
  }
  return f;
}

std::vector<MetaCluster> form_meta_clusters(const CenterForest& forest, int l,
                                            std::vector<int>& mc_of) {
  const int K = forest.size();
  mc_of.assign(K, -1);
  std::vector<int> order(K);
  for (int k = 0; k < K; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::make_pair(forest.depth[a], forest.id[a]) <
           std::make_pair(forest.depth[b], forest.id[b]);
  });
  std::vector<MetaCluster> mcs;
  for (int r : order) {
    if (mc_of[r] >= 0) continue;
    const int idx = static_cast<int>(mcs.size());
    MetaCluster mc;
    mc.root = r;
    mc.members.push_back(r);
    mc_of[r] = idx;
    while (static_cast<int>(mc.members.size()) < l) {
      int best = -1;
      for (int v : mc.members) {
        for (int c : forest.children(v)) {
          if (mc_of[c] >= 0) continue;
          if (best < 0 || std::make_pair(forest.weight[c], forest.id[c]) <
                              std::make_pair(forest.weight[best], forest.id[best])) {
            best = c;
          }
        }
      }
      if (best < 0) break;
      mc.members.push_back(best);
      mc_of[best] = idx;
    }
    mc.connect_from = r;
    mc.connect_weight = forest.weight[r];
    mc.connect_cost = forest.sigma_cost[r];
    if (forest.sigma[r] >= 0) {
      mc.connect_to = forest.sigma[r];
      mc.parent_mc = mc_of[forest.sigma[r]];
      mcs[mc.parent_mc].child_mcs.push_back(idx);
    } else {
      mc.connect_to = r;
    }
    mcs.push_back(std::move(mc));
  }
  return mcs;
}

void partition_groups(MetaCluster& mc, const ClusterSet& cs,
                      const CenterForest& forest, int capacity,
                      double threshold) {
  mc.p = mc.q = 0;
  mc.j_d = mc.j_s = -1;
  for (int v : mc.members) {
    if (cs.clusters[v].dense()) {
      ++mc.p;
      if (mc.j_d < 0) mc.j_d = v;
    } else {
      ++mc.q;
      if (mc.j_s < 0) mc.j_s = v;
    }
  }
  mc.t = mc.p + mc.q;
  mc.g1.clear();
  mc.g2.clear();
  mc.residual_case2 = false;
  mc.residual = 0.0;
  long floor_d = 0;
  if (mc.j_d < 0) {
    mc.gamma = 0;
    mc.g2 = mc.members;
    mc.q_prime = mc.q;
  } else {
    const double d = cs.clusters[mc.j_d].demand;
    floor_d = floor_ratio(d, capacity);
    mc.residual = std::max(0.0, d / capacity - static_cast<double>(floor_d));
    mc.g1.push_back(mc.j_d);
    mc.gamma = floor_d;
    if (mc.residual >= threshold) mc.residual_case2 = true;
    if (mc.residual_case2 && mc.q >= 1) {
      mc.g1.push_back(mc.j_s);
      mc.gamma = floor_d + 1;
    }
    for (int v : mc.members) {
      if (cs.clusters[v].dense()) continue;
      if (mc.residual_case2 && v == mc.j_s) continue;
      mc.g2.push_back(v);
    }
    mc.q_prime = static_cast<int>(mc.g2.size());
  }
  mc.g2_requirement = std::max(0, mc.q_prime - 1);
  for (int v : mc.members) {
    if (forest.lone_sparse_root[v]) mc.g2_requirement = std::max(mc.g2_requirement, 1L);
  }
  mc.in_m1 = mc.p == 1 && mc.q == 1;
  if (mc.in_m1) {
    mc.beta = mc.residual_case2 ? floor_d + 1 : floor_d;
  } else {
    mc.beta = floor_d + std::max(0, mc.q - 1);
  }
  if (mc.j_d < 0 && mc.g2_requirement > mc.beta) mc.beta = mc.g2_requirement;
}

Hierarchy build_hierarchy(const Instance& inst, const ClusterSet& cs) {
  Hierarchy h;
  h.l = cs.l;
  h.threshold = 4.0 / (cs.l - 1);
  h.forest = build_forest(inst, cs);
  h.mcs = form_meta_clusters(h.forest, cs.l, h.mc_of);
  for (auto& mc : h.mcs) {
    partition_groups(mc, cs, h.forest, inst.capacity(), h.threshold);
  }
  return h;
}

std::vector<std::vector<int>> truncated_sets(const Instance& inst,
                                             const ClusterSet& cs,
                                             const CenterForest& forest) {
  std::vector<std::vector<int>> T(cs.num_clusters());
  for (int k = 0; k < cs.num_clusters(); ++k) {
    const auto& c = cs.clusters[k];
    if (c.dense() || forest.lone_sparse_root[k]) {
      T[k] = c.facilities;
      continue;
    }
    for (int i : c.facilities) {
      if (inst.fc(i, c.center) <= forest.sigma_cost[k]) T[k].push_back(i);
    }
  }
  return T;
}

void check_hierarchy(const Instance& inst, const ClusterSet& cs,
                     const Hierarchy& h, CheckLog& log) {
  const auto& f = h.forest;
  const int K = f.size();
  for (int k = 0; k < K; ++k) {
    const int s = f.sigma[k];
    if (s < 0) {
      log.require("binarized root has at most one child", f.next_child[k] < 0,
                  [&] { return fmt("root=%d", f.id[k]); });
      continue;
    }
    const double eta_cost = inst.cc(f.id[k], f.id[f.eta[k]]);
    log.leq("binarized parent within twice nearest center", f.sigma_cost[k],
            2.0 * eta_cost, [&] { return fmt("center=%d", f.id[k]); });
    log.leq("tree weights non-increasing upward", f.weight[s], f.weight[k],
            [&] { return fmt("center=%d parent=%d", f.id[k], f.id[s]); });
    if (f.sigma[s] >= 0) {
      log.leq("binarized edge distances non-increasing upward", f.sigma_cost[s],
              f.sigma_cost[k],
              [&] { return fmt("center=%d parent=%d", f.id[k], f.id[s]); },
              Severity::kDiagnostic);
    }
  }
  for (const auto& mc : h.mcs) {
    const bool leaf = mc.child_mcs.empty();
    const int size = static_cast<int>(mc.members.size());
    log.require("meta-cluster size", leaf ? size <= h.l : size == h.l,
                [&] { return fmt("mc root=%d size=%d", f.id[mc.root], size); });
    for (int v : mc.members) {
      if (!cs.clusters[v].dense()) continue;
      log.require("dense cluster only at root of root meta-cluster",
                  v == mc.root && mc.is_root(),
                  [&] { return fmt("center=%d", f.id[v]); });
    }
    if (mc.is_root()) continue;
    const auto& parent = h.mcs[mc.parent_mc];
    double parent_max = 0.0;
    double parent_max_dist = 0.0;
    for (int v : parent.members) {
      if (v == parent.root) continue;
      parent_max = std::max(parent_max, f.weight[v]);
      parent_max_dist = std::max(parent_max_dist, f.sigma_cost[v]);
    }
    double child_min = kInf;
    double child_min_dist = kInf;
    for (int v : mc.members) {
      if (v == mc.root) continue;
      child_min = std::min(child_min, f.weight[v]);
      child_min_dist = std::min(child_min_dist, f.sigma_cost[v]);
    }
    auto w = [&] { return fmt("mc root=%d", f.id[mc.root]); };
    log.leq("parent edges within connecting edge", parent_max, mc.connect_weight, w);
    if (child_min < kInf) {
      log.leq("connecting edge within child edges", mc.connect_weight, child_min, w);
    }
    log.leq("parent edge distances within connecting edge", parent_max_dist,
            mc.connect_cost, w, Severity::kDiagnostic);
    if (child_min_dist < kInf) {
      log.leq("connecting edge distance within child edge distances",
              mc.connect_cost, child_min_dist, w, Severity::kDiagnostic);
    }
  }
  const auto T = truncated_sets(inst, cs, f);
  for (int k = 0; k < K; ++k) {
    if (cs.clusters[k].dense()) continue;
    const auto& ball = cs.clusters[k].ball;
    log.require("ball inside truncated set",
                std::includes(T[k].begin(), T[k].end(), ball.begin(), ball.end()),
                [&] { return fmt("center=%d", f.id[k]); });
  }
}

std::string hierarchy_dot(const ClusterSet& cs, const Hierarchy& h) {
  std::ostringstream os;
  os << "digraph hierarchy {\n";
  for (size_t r = 0; r < h.mcs.size(); ++r) {
    const auto& mc = h.mcs[r];
    os << "  subgraph cluster_mc" << r << " {\n    label=\"mc" << r
       << " gamma=" << mc.gamma << " g2_req=" << mc.g2_requirement
       << " beta=" << mc.beta << "\";\n";
    for (int v : mc.members) {
      os << "    c" << h.forest.id[v] << " [label=\"" << h.forest.id[v]
         << (cs.clusters[v].dense() ? " D" : " S") << "\"];\n";
    }
    os << "  }\n";
  }
  for (int k = 0; k < h.forest.size(); ++k) {
    if (h.forest.sigma[k] < 0) continue;
    os << "  c" << h.forest.id[k] << " -> c" << h.forest.id[h.forest.sigma[k]]
       << " [label=\"" << fmt("%.6g", h.forest.sigma_cost[k]) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace capround
