#include "capround/flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

namespace capround {

int FlowNetwork::add_arc(int from, int to, long capacity, double cost) {
  if (from < 0 || to < 0 || from >= num_nodes() || to >= num_nodes()) {
    throw Error("flow arc references an unknown node");
  }
  if (capacity < 0) throw Error("negative arc capacity");
  arcs_.push_back({from, to, capacity, cost});
  return num_arcs() - 1;
}

namespace {

struct Edge {
  int to;
  int rev;
  long cap;
  double cost;
  int arc;  // original arc id, -1 for helper or reverse edges
};

class Residual {
 public:
  explicit Residual(int n) : g_(n) {}

  void add(int u, int v, long cap, double cost, int arc) {
    g_[u].push_back({v, static_cast<int>(g_[v].size()), cap, cost, arc});
    g_[v].push_back({u, static_cast<int>(g_[u].size()) - 1, 0, -cost, -1});
  }

  // Returns total flow sent from s to t, up to `want`.
  long run(int s, int t, long want, double& cost) {
    const int n = static_cast<int>(g_.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> h(n, 0.0);
    // Bellman-Ford for initial potentials (arc costs may be negative).
    {
      std::vector<double> d(n, inf);
      d[s] = 0.0;
      for (int it = 0; it < n; ++it) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
          if (d[u] == inf) continue;
          for (const auto& e : g_[u]) {
            if (e.cap > 0 && d[u] + e.cost < d[e.to] - 1e-12) {
              d[e.to] = d[u] + e.cost;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      for (int u = 0; u < n; ++u) h[u] = d[u] == inf ? 0.0 : d[u];
    }
    long sent = 0;
    std::vector<double> dist(n);
    std::vector<int> prev_node(n), prev_edge(n);
    using Item = std::pair<double, int>;
    while (sent < want) {
      std::fill(dist.begin(), dist.end(), inf);
      dist[s] = 0.0;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      pq.push({0.0, s});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (int k = 0; k < static_cast<int>(g_[u].size()); ++k) {
          const auto& e = g_[u][k];
          if (e.cap <= 0) continue;
          const double rc = std::max(0.0, e.cost + h[u] - h[e.to]);
          if (dist[u] + rc < dist[e.to]) {
            dist[e.to] = dist[u] + rc;
            prev_node[e.to] = u;
            prev_edge[e.to] = k;
            pq.push({dist[e.to], e.to});
          }
        }
      }
      if (dist[t] == inf) break;
      for (int u = 0; u < n; ++u) {
        if (dist[u] < inf) h[u] += dist[u];
      }
      long push = want - sent;
      for (int v = t; v != s; v = prev_node[v]) {
        push = std::min(push, g_[prev_node[v]][prev_edge[v]].cap);
      }
      for (int v = t; v != s; v = prev_node[v]) {
        auto& e = g_[prev_node[v]][prev_edge[v]];
        e.cap -= push;
        g_[v][e.rev].cap += push;
        cost += push * e.cost;
      }
      sent += push;
    }
    return sent;
  }

  const std::vector<std::vector<Edge>>& graph() const { return g_; }

 private:
  std::vector<std::vector<Edge>> g_;
};

}  // namespace

FlowResult min_cost_flow(const FlowNetwork& net) {
  const int n = net.num_nodes();
  const int s = n, t = n + 1;
  Residual res(n + 2);
  for (int a = 0; a < net.num_arcs(); ++a) {
    const auto& arc = net.arc(a);
    res.add(arc.from, arc.to, arc.capacity, arc.cost, a);
  }
  long total = 0, balance = 0;
  for (int v = 0; v < n; ++v) {
    const long b = net.supply(v);
    balance += b;
    if (b > 0) {
      res.add(s, v, b, 0.0, -1);
      total += b;
    } else if (b < 0) {
      res.add(v, t, -b, 0.0, -1);
    }
  }
  if (balance != 0) throw InfeasibleError("flow supplies do not sum to zero");
  double cost = 0.0;
  const long sent = res.run(s, t, total, cost);
  if (sent < total) {
    throw InfeasibleError("insufficient capacity to route all supply");
  }
  FlowResult out;
  out.flow.assign(net.num_arcs(), 0);
  for (int u = 0; u < n; ++u) {
    for (const auto& e : res.graph()[u]) {
      if (e.arc >= 0) out.flow[e.arc] = net.arc(e.arc).capacity - e.cap;
    }
  }
  for (int a = 0; a < net.num_arcs(); ++a) {
    out.cost += out.flow[a] * net.arc(a).cost;
  }
  return out;
}

AssignmentResult min_cost_assignment(const std::vector<long>& capacity,
                                     int num_clients,
                                     const std::vector<double>& cost_matrix) {
  const int nf = static_cast<int>(capacity.size());
  long total_cap = 0;
  for (int i = 0; i < nf; ++i) total_cap += std::max(0L, capacity[i]);
  if (total_cap < num_clients) {
    throw InfeasibleError("total capacity below number of clients");
  }
  // Clients 0..m-1, facilities m..m+nf-1, one sink collecting all demand.
  FlowNetwork full(num_clients + nf + 1);
  const int sink = num_clients + nf;
  for (int j = 0; j < num_clients; ++j) full.set_supply(j, 1);
  full.set_supply(sink, -num_clients);
  std::vector<std::pair<int, int>> arc_pair;
  for (int i = 0; i < nf; ++i) {
    if (capacity[i] <= 0) continue;
    for (int j = 0; j < num_clients; ++j) {
      full.add_arc(j, num_clients + i, 1, cost_matrix[i * num_clients + j]);
      arc_pair.push_back({i, j});
    }
    full.add_arc(num_clients + i, sink, capacity[i], 0.0);
    arc_pair.push_back({-1, -1});
  }
  const FlowResult fr = min_cost_flow(full);
  AssignmentResult out;
  out.assignment.assign(num_clients, -1);
  for (int a = 0; a < full.num_arcs(); ++a) {
    const auto [i, j] = arc_pair[a];
    if (i >= 0 && fr.flow[a] > 0) {
      out.assignment[j] = i;
      out.cost += cost_matrix[i * num_clients + j];
    }
  }
  return out;
}

}  // namespace capround
