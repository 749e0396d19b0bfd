#include "capround/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace capround {

std::string to_string(Problem p) {
  switch (p) {
    case Problem::kCkm:
      return "ckm";
    case Problem::kCflp:
      return "cflp";
    case Problem::kCkflp:
      return "ckflp";
  }
  return "?";
}

Problem parse_problem(const std::string& s) {
  if (s == "ckm") return Problem::kCkm;
  if (s == "cflp") return Problem::kCflp;
  if (s == "ckflp") return Problem::kCkflp;
  throw UsageError("unknown problem '" + s + "' (expected ckm|cflp|ckflp)");
}

int l_from_eps(double eps) {
  if (!(eps > 0.0)) throw UsageError("eps must be positive");
  const int l = static_cast<int>(std::ceil(4.0 / eps - 1e-12)) + 1;
  return std::max(2, l);
}

double alpha_of_l(int l) {
  const double base = 2.0 * l + 13.0;
  return l * base + capacity_factor(l) * base + 2.0 * (l + 1);
}

namespace {

void check_costs(const std::vector<double>& cost, int num_clients,
                 int capacity) {
  if (cost.empty()) throw ParseError("instance needs at least one facility");
  if (num_clients < 1) throw ParseError("instance needs at least one client");
  if (capacity < 1) throw ParseError("capacity must be a positive integer");
  for (double f : cost) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      throw ParseError("facility costs must be finite and non-negative");
    }
  }
}

}  // namespace

Instance Instance::from_coordinates(Problem problem,
                                    std::vector<double> facility_cost,
                                    int num_clients, int capacity, int dim,
                                    std::vector<double> coords) {
  check_costs(facility_cost, num_clients, capacity);
  if (dim < 1) throw ParseError("euclidean dimension must be >= 1");
  Instance inst;
  inst.problem_ = problem;
  inst.cost_ = std::move(facility_cost);
  inst.num_clients_ = num_clients;
  inst.capacity_ = capacity;
  inst.dim_ = dim;
  if (coords.size() != static_cast<size_t>(inst.num_points() * dim)) {
    throw ParseError("coordinate count does not match point count");
  }
  inst.coords_ = std::move(coords);
  inst.compute_euclidean();
  return inst;
}

Instance Instance::from_matrix(Problem problem,
                               std::vector<double> facility_cost,
                               int num_clients, int capacity,
                               std::vector<double> matrix) {
  check_costs(facility_cost, num_clients, capacity);
  Instance inst;
  inst.problem_ = problem;
  inst.cost_ = std::move(facility_cost);
  inst.num_clients_ = num_clients;
  inst.capacity_ = capacity;
  const size_t np = inst.num_points();
  if (matrix.size() != np * np) {
    throw ParseError("distance matrix must be (n+m)x(n+m)");
  }
  inst.dist_ = std::move(matrix);
  return inst;
}

void Instance::compute_euclidean() {
  const int np = num_points();
  dist_.assign(static_cast<size_t>(np) * np, 0.0);
  for (int a = 0; a < np; ++a) {
    for (int b = a + 1; b < np; ++b) {
      double s = 0.0;
      for (int d = 0; d < dim_; ++d) {
        const double diff = coords_[a * dim_ + d] - coords_[b * dim_ + d];
        s += diff * diff;
      }
      dist_[a * np + b] = dist_[b * np + a] = std::sqrt(s);
    }
  }
}

Instance& Instance::set_budget(double b) {
  if (!(b >= 0.0)) throw ParseError("budget must be non-negative");
  budget_ = b;
  return *this;
}

Instance& Instance::set_k(int k) {
  if (k < 0) throw ParseError("k must be non-negative");
  k_ = k;
  return *this;
}

Instance Instance::restrict_facilities(const std::vector<int>& keep) const {
  Instance out = *this;
  const int n = num_facilities();
  const int m = num_clients_;
  const int nk = static_cast<int>(keep.size());
  std::vector<int> points;
  points.reserve(nk + m);
  out.cost_.clear();
  for (int i : keep) {
    out.cost_.push_back(cost_[i]);
    points.push_back(i);
  }
  for (int j = 0; j < m; ++j) points.push_back(n + j);
  const int np = nk + m;
  out.dist_.assign(static_cast<size_t>(np) * np, 0.0);
  for (int a = 0; a < np; ++a) {
    for (int b = 0; b < np; ++b) {
      out.dist_[a * np + b] = point_dist(points[a], points[b]);
    }
  }
  if (dim_ > 0) {
    out.coords_.clear();
    for (int p : points) {
      for (int d = 0; d < dim_; ++d) out.coords_.push_back(coords_[p * dim_ + d]);
    }
  }
  return out;
}

void Instance::validate() const {
  const int np = num_points();
  for (int a = 0; a < np; ++a) {
    if (point_dist(a, a) != 0.0) {
      throw MetricError("dist(p,p) must be 0 (point " + std::to_string(a) + ")");
    }
    for (int b = 0; b < np; ++b) {
      const double d = point_dist(a, b);
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw MetricError("distances must be finite and non-negative");
      }
      if (std::abs(d - point_dist(b, a)) > kBoundTol) {
        throw MetricError("distance matrix is not symmetric at (" +
                          std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
  }
  auto triangle = [&](int a, int b, int c) {
    if (point_dist(a, b) > point_dist(a, c) + point_dist(c, b) + kBoundTol) {
      throw MetricError("triangle inequality violated on (" +
                        std::to_string(a) + "," + std::to_string(b) + "," +
                        std::to_string(c) + ")");
    }
  };
  if (np <= 200) {
    for (int a = 0; a < np; ++a)
      for (int b = a + 1; b < np; ++b)
        for (int c = 0; c < np; ++c) triangle(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed);
    const long samples = 10L * np * np;
    for (long s = 0; s < samples; ++s) {
      triangle(static_cast<int>(rng() % np), static_cast<int>(rng() % np),
               static_cast<int>(rng() % np));
    }
  }
}

// ---------------------------------------------------------------------------
// Generation

namespace {

// Bit-stable across standard libraries, unlike the <random> distributions.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

double opt_feasible_budget(const std::vector<double>& cost, int n_clients,
                           int capacity) {
  const long need = (n_clients + capacity - 1) / capacity;
  if (static_cast<long>(cost.size()) < need) {
    throw InfeasibleError("total capacity " +
                          std::to_string(cost.size() * capacity) +
                          " is below demand " + std::to_string(n_clients));
  }
  std::vector<double> sorted = cost;
  std::sort(sorted.begin(), sorted.end());
  double b = 0.0;
  for (long t = 0; t < need; ++t) b += sorted[t];
  return b;
}

Instance generate(const GenParams& p) {
  if (p.n_facilities < 1 || p.n_clients < 1 || p.capacity < 1) {
    throw UsageError("generate needs n_facilities, n_clients, capacity >= 1");
  }
  if (p.cost_min < 0 || p.cost_max < p.cost_min) {
    throw UsageError("invalid facility cost range");
  }
  std::mt19937_64 rng(p.seed);
  std::vector<double> cost(p.n_facilities);
  for (double& f : cost) f = uniform_int(rng, p.cost_min, p.cost_max);
  const int np = p.n_facilities + p.n_clients;

  Instance inst = [&] {
    if (p.family == Family::kEuclidean) {
      const int dim = 2;
      std::vector<double> coords(static_cast<size_t>(np) * dim);
      for (double& c : coords) c = p.coord_range * unit_double(rng);
      return Instance::from_coordinates(p.problem, cost, p.n_clients,
                                        p.capacity, dim, std::move(coords));
    }
    if (p.family == Family::kClustered) {
      const int dim = 2;
      const int blobs = p.blobs > 0 ? p.blobs : std::max(2, p.n_facilities / 2);
      std::vector<double> centers(static_cast<size_t>(blobs) * dim);
      for (double& c : centers) c = p.coord_range * unit_double(rng);
      const double side = p.blob_spread * p.coord_range;
      std::vector<double> coords(static_cast<size_t>(np) * dim);
      for (int a = 0; a < np; ++a) {
        const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(blobs));
        for (int d = 0; d < dim; ++d) {
          coords[a * dim + d] = centers[b * dim + d] + side * unit_double(rng);
        }
      }
      return Instance::from_coordinates(p.problem, cost, p.n_clients,
                                        p.capacity, dim, std::move(coords));
    }
    // Off-diagonal entries in [R/2, R] always satisfy the triangle inequality.
    std::vector<double> m(static_cast<size_t>(np) * np, 0.0);
    for (int a = 0; a < np; ++a) {
      for (int b = a + 1; b < np; ++b) {
        const double d = p.coord_range * (0.5 + 0.5 * unit_double(rng));
        m[a * np + b] = m[b * np + a] = d;
      }
    }
    return Instance::from_matrix(p.problem, cost, p.n_clients, p.capacity,
                                 std::move(m));
  }();

  if (p.problem == Problem::kCkm) {
    inst.set_budget(p.budget_opt_feasible
                        ? std::floor(p.budget_scale *
                                     opt_feasible_budget(cost, p.n_clients, p.capacity))
                        : p.budget);
  } else if (p.problem == Problem::kCkflp) {
    const int need = (p.n_clients + p.capacity - 1) / p.capacity;
    if (p.budget_opt_feasible && need > p.n_facilities) {
      throw InfeasibleError("total capacity below demand");
    }
    inst.set_k(p.k > 0 ? p.k : need);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// CAPKM v1 text format

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next non-empty line with comments stripped, split into tokens.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::vector<std::string> expect(const std::string& what) {
    std::vector<std::string> tokens;
    if (!next(tokens)) {
      throw ParseError("unexpected end of file, expected " + what);
    }
    return tokens;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  }
};

double parse_double(const LineReader& r, const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) r.fail("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    r.fail("bad number '" + s + "'");
  }
}

long parse_long(const LineReader& r, const std::string& s) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) r.fail("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    r.fail("bad integer '" + s + "'");
  }
}

long keyed_int(LineReader& r, const std::string& key) {
  auto t = r.expect(key);
  if (t.size() != 2 || t[0] != key) r.fail("expected '" + key + " <int>'");
  return parse_long(r, t[1]);
}

}  // namespace

Instance parse_instance(std::istream& in) {
  LineReader r{in};
  auto t = r.expect("header");
  if (t.size() != 2 || t[0] != "CAPKM" || t[1] != "v1") {
    r.fail("expected header 'CAPKM v1'");
  }
  t = r.expect("problem");
  if (t.size() != 2 || t[0] != "problem") r.fail("expected 'problem <p>'");
  Problem problem;
  try {
    problem = parse_problem(t[1]);
  } catch (const UsageError& e) {
    r.fail(e.what());
  }
  const long n = keyed_int(r, "facilities");
  const long m = keyed_int(r, "clients");
  const long u = keyed_int(r, "capacity");
  if (n < 1 || m < 1) r.fail("need at least one facility and one client");
  if (u < 1) r.fail("capacity must be a positive integer");

  double budget = 0.0;
  long k = 0;
  t = r.expect("fcost");
  if (problem == Problem::kCkm) {
    if (t.size() != 2 || t[0] != "budget") r.fail("expected 'budget <B>'");
    budget = parse_double(r, t[1]);
    if (!(budget >= 0.0)) r.fail("budget must be non-negative");
    t = r.expect("fcost");
  } else if (problem == Problem::kCkflp) {
    if (t.size() != 2 || t[0] != "k") r.fail("expected 'k <k>'");
    k = parse_long(r, t[1]);
    if (k < 0) r.fail("k must be non-negative");
    t = r.expect("fcost");
  }
  if (t.empty() || t[0] != "fcost" || static_cast<long>(t.size()) != n + 1) {
    r.fail("expected 'fcost' followed by " + std::to_string(n) + " values");
  }
  std::vector<double> cost(n);
  for (long i = 0; i < n; ++i) {
    cost[i] = parse_double(r, t[i + 1]);
    if (!(cost[i] >= 0.0)) r.fail("facility cost must be non-negative");
  }

  t = r.expect("metric");
  if (t.size() < 2 || t[0] != "metric") r.fail("expected 'metric ...'");
  const long np = n + m;
  Instance inst = [&] {
    if (t[1] == "euclidean") {
      if (t.size() != 3) r.fail("expected 'metric euclidean <d>'");
      const long dim = parse_long(r, t[2]);
      if (dim < 1) r.fail("dimension must be >= 1");
      std::vector<double> coords;
      coords.reserve(np * dim);
      for (long p = 0; p < np; ++p) {
        auto row = r.expect("coordinates");
        if (static_cast<long>(row.size()) != dim) {
          r.fail("expected " + std::to_string(dim) + " coordinates");
        }
        for (const auto& s : row) coords.push_back(parse_double(r, s));
      }
      return Instance::from_coordinates(problem, cost, static_cast<int>(m),
                                        static_cast<int>(u),
                                        static_cast<int>(dim), std::move(coords));
    }
    if (t[1] == "matrix") {
      if (t.size() != 2) r.fail("expected 'metric matrix'");
      std::vector<double> mat;
      mat.reserve(np * np);
      for (long p = 0; p < np; ++p) {
        auto row = r.expect("matrix row");
        if (static_cast<long>(row.size()) != np) {
          r.fail("matrix row needs " + std::to_string(np) + " entries");
        }
        for (const auto& s : row) mat.push_back(parse_double(r, s));
      }
      return Instance::from_matrix(problem, cost, static_cast<int>(m),
                                   static_cast<int>(u), std::move(mat));
    }
    r.fail("unknown metric '" + t[1] + "'");
  }();
  std::vector<std::string> extra;
  if (r.next(extra)) r.fail("trailing content after metric block");
  inst.set_budget(budget);
  inst.set_k(static_cast<int>(k));
  inst.validate();
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

namespace {

std::string fmt_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void save_instance(const Instance& inst, std::ostream& out) {
  out << "CAPKM v1\n";
  out << "problem " << to_string(inst.problem()) << "\n";
  out << "facilities " << inst.num_facilities() << "\n";
  out << "clients " << inst.num_clients() << "\n";
  out << "capacity " << inst.capacity() << "\n";
  if (inst.problem() == Problem::kCkm) {
    out << "budget " << fmt_exact(inst.budget()) << "\n";
  } else if (inst.problem() == Problem::kCkflp) {
    out << "k " << inst.k() << "\n";
  }
  out << "fcost";
  for (double f : inst.facility_costs()) out << ' ' << fmt_exact(f);
  out << "\n";
  const int np = inst.num_points();
  if (inst.has_coordinates()) {
    const int dim = inst.dim();
    out << "metric euclidean " << dim << "\n";
    for (int p = 0; p < np; ++p) {
      for (int d = 0; d < dim; ++d) {
        out << (d ? " " : "") << fmt_exact(inst.coordinates()[p * dim + d]);
      }
      out << "\n";
    }
  } else {
    out << "metric matrix\n";
    for (int a = 0; a < np; ++a) {
      for (int b = 0; b < np; ++b) {
        out << (b ? " " : "") << fmt_exact(inst.point_dist(a, b));
      }
      out << "\n";
    }
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file '" + path + "'");
  save_instance(inst, out);
}

}  // namespace capround
