#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capround/flow.hpp"
#include "capround/instance.hpp"
#include "capround/lp.hpp"

namespace testsupport {

using capround::Instance;
using capround::Problem;

// Two facilities at 0 and 10 (f = 1, 1), clients at 0, 1, 10, u = 2, B = 2.
inline const char* kTinyA =
    "CAPKM v1\n"
    "problem ckm\n"
    "facilities 2\n"
    "clients 3\n"
    "capacity 2\n"
    "budget 2\n"
    "fcost 1 1\n"
    "metric euclidean 1\n"
    "0\n10\n0\n1\n10\n";

inline Instance tiny_a(Problem p = Problem::kCkm) {
  std::istringstream in(kTinyA);
  Instance inst = capround::parse_instance(in);
  inst.set_problem(p);
  if (p == Problem::kCkflp) inst.set_k(2);
  return inst;
}

// Points on a line.
inline Instance line_instance(Problem p, std::vector<double> fcost,
                              const std::vector<double>& fac_pos,
                              const std::vector<double>& cli_pos, int u) {
  std::vector<double> coords(fac_pos);
  coords.insert(coords.end(), cli_pos.begin(), cli_pos.end());
  return Instance::from_coordinates(p, std::move(fcost),
                                    static_cast<int>(cli_pos.size()), u, 1,
                                    std::move(coords));
}

inline std::string dump(const Instance& inst) {
  std::ostringstream out;
  capround::save_instance(inst, out);
  return out.str();
}

// Small LP with integer data; bounds are [0,1] or [0,inf).
// With `planted`, right-hand sides are chosen so a random integer point is
// feasible.
inline capround::LpModel random_lp(std::mt19937_64& rng, int max_vars = 8,
                                   int max_rows = 8, bool planted = false) {
  std::uniform_int_distribution<int> nv(1, max_vars), nr(1, max_rows);
  std::uniform_int_distribution<int> coef(-5, 5), cost(-5, 5), rhs(-3, 8);
  std::uniform_int_distribution<int> pick(0, 2), slack(0, 3), point(0, 3);
  capround::LpModel m;
  const int n = nv(rng), r = nr(rng);
  std::vector<int> x0(n);
  for (int v = 0; v < n; ++v) {
    const double upper = pick(rng) == 0 ? capround::kInf : 1.0;
    x0[v] = upper == 1.0 ? point(rng) % 2 : point(rng);
    m.add_variable(0.0, upper, cost(rng));
  }
  for (int k = 0; k < r; ++k) {
    std::vector<capround::LpTerm> terms;
    int at_point = 0;
    for (int v = 0; v < n; ++v) {
      const int c = coef(rng);
      if (c != 0 && pick(rng) != 0) {
        terms.push_back({v, static_cast<double>(c)});
        at_point += c * x0[v];
      }
    }
    if (terms.empty()) {
      terms.push_back({0, 1.0});
      at_point = x0[0];
    }
    const int s = pick(rng);
    const auto sense = s == 0 ? capround::Sense::kLe
                       : s == 1 ? capround::Sense::kGe
                                : capround::Sense::kEq;
    int b = rhs(rng);
    if (planted) {
      b = s == 0 ? at_point + slack(rng) : s == 1 ? at_point - slack(rng) : at_point;
    }
    m.add_row(std::move(terms), sense, b);
  }
  return m;
}

// Cheapest assignment of every client to a facility with remaining capacity,
// by exhaustive enumeration. Returns +inf when none exists.
inline double brute_force_assignment(const std::vector<long>& capacity,
                                     int num_clients,
                                     const std::vector<double>& cost) {
  const int n = static_cast<int>(capacity.size());
  std::vector<int> a(num_clients, 0);
  double best = capround::kInf;
  while (true) {
    std::vector<long> used(n, 0);
    double c = 0.0;
    bool ok = true;
    for (int j = 0; j < num_clients; ++j) {
      if (++used[a[j]] > capacity[a[j]]) ok = false;
      c += cost[static_cast<size_t>(a[j]) * num_clients + j];
    }
    if (ok && c < best) best = c;
    int pos = 0;
    while (pos < num_clients && ++a[pos] == n) a[pos++] = 0;
    if (pos == num_clients) break;
  }
  return best;
}

inline capround::GenParams clustered(int n, int m, int u, std::uint64_t seed,
                                     Problem p = Problem::kCkm) {
  capround::GenParams gp;
  gp.family = capround::Family::kClustered;
  gp.problem = p;
  gp.n_facilities = n;
  gp.n_clients = m;
  gp.capacity = u;
  gp.seed = seed;
  return gp;
}

}  // namespace testsupport
