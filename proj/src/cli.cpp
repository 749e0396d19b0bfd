#include "capround/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "capround/cflp.hpp"
#include "capround/ckflp.hpp"
#include "capround/clustering.hpp"
#include "capround/hierarchy.hpp"
#include "capround/oracle.hpp"
#include "capround/relaxation.hpp"
#include "capround/report.hpp"

namespace capround {

RoundedSolution solve_problem(const Instance& inst, const SolveOptions& opt) {
  switch (inst.problem()) {
    case Problem::kCkm:
      return solve_ckm(inst, opt);
    case Problem::kCflp:
      return solve_cflp(inst, opt);
    case Problem::kCkflp:
      return solve_ckflp(inst, opt);
  }
  throw UsageError("unknown problem");
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("CAPROUND_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw UsageError("CAPROUND_SEED must be an integer");
  return v;
}

BenchOutcome run_bench(const BenchConfig& cfg) {
  BenchOutcome out;
  std::ostringstream csv;
  csv << csv_header(cfg.problem) << '\n';
  for (const auto& [n, m] : cfg.sizes) {
    for (int s = 0; s < cfg.seeds; ++s) {
      GenParams gp;
      gp.problem = cfg.problem;
      gp.n_facilities = n;
      gp.n_clients = m;
      gp.capacity = cfg.capacity;
      gp.family = cfg.family;
      gp.budget_scale = cfg.budget_scale;
      gp.seed = cfg.base_seed + static_cast<std::uint64_t>(s);
      const std::string name = fmt("n%dm%ds%llu", n, m,
                                   static_cast<unsigned long long>(gp.seed));
      std::optional<Instance> inst;
      try {
        inst = generate(gp);
      } catch (const Error& e) {
        std::cerr << name << ": " << e.what() << '\n';
        out.errors += static_cast<int>(cfg.eps.size());
        continue;
      }
      std::optional<double> opt;
      if (n <= cfg.oracle_max) {
        try {
          opt = exact_solve(*inst).cost;
        } catch (const InfeasibleError&) {
        }
      }
      for (double eps : cfg.eps) {
        try {
          const RoundedSolution sol = solve_problem(*inst, {eps, cfg.assign});
          csv << csv_row(name, sol, opt) << '\n';
          ++out.rows;
          if (!sol.verdict()) ++out.failed_verdicts;
        } catch (const BoundViolation& e) {
          std::cerr << name << " eps=" << format_number(eps) << ": " << e.what() << '\n';
          ++out.failed_verdicts;
        } catch (const Error& e) {
          std::cerr << name << " eps=" << format_number(eps) << ": " << e.what() << '\n';
          ++out.errors;
        }
      }
    }
  }
  out.csv = csv.str();
  return out;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

Family parse_family(const std::string& s) {
  if (s == "euclidean") return Family::kEuclidean;
  if (s == "matrix") return Family::kUniformMatrix;
  if (s == "clustered") return Family::kClustered;
  throw UsageError("--family must be euclidean, matrix or clustered");
}

AssignMode parse_assign(const std::string& s) {
  if (s == "fractional") return AssignMode::kFractional;
  if (s == "integral") return AssignMode::kIntegral;
  throw UsageError("--assign must be fractional or integral");
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad eps value '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--eps-list is empty");
  return out;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw UsageError("sizes are written NxM, got '" + item + "'");
    try {
      out.push_back({std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1))});
    } catch (const std::exception&) {
      throw UsageError("bad size '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--sizes is empty");
  return out;
}

Instance load_for(const std::string& path, const std::string& problem, int k) {
  Instance inst = load_instance(path);
  if (!problem.empty()) inst.set_problem(parse_problem(problem));
  if (inst.problem() == Problem::kCkflp) {
    if (k <= 0) throw UsageError("ckflp requires --k");
    inst.set_k(k);
  }
  return inst;
}

struct SolveFlags {
  std::string problem, input, out, manifest, assign = "fractional";
  double eps = 0.0;
  int k = 0;
  bool oracle = false;
};

int cmd_solve(const SolveFlags& f) {
  const Instance inst = load_for(f.input, f.problem, f.k);
  SolveOptions opt{f.eps, parse_assign(f.assign)};
  RoundedSolution sol;
  try {
    sol = solve_problem(inst, opt);
  } catch (const BoundViolation& e) {
    std::cerr << "bound violated: " << e.check() << "\n  witness: " << e.witness() << '\n';
    return 2;
  }
  std::optional<double> opt_value;
  if (f.oracle) opt_value = exact_solve(inst).cost;
  write_text(f.out, csv_header(inst.problem()) + "\n" + csv_row(f.input, sol, opt_value) + "\n");
  if (!f.manifest.empty()) {
    write_text(f.manifest, run_manifest(f.input, sol, opt_value).dump(2) + "\n");
  }
  if (!sol.verdict()) {
    for (const auto& name : sol.checks.failed_bounds()) {
      const CheckRecord* r = sol.checks.find(name);
      std::cerr << "bound failed: " << name << " (" << r->failed << "/" << r->evaluated
                << ")\n  witness: " << r->first_witness << '\n';
    }
    if (!sol.ok_budget) std::cerr << "verdict failed: budget\n";
    if (!sol.ok_capacity) std::cerr << "verdict failed: capacity\n";
    if (!sol.ok_cost) std::cerr << "verdict failed: cost\n";
    return 2;
  }
  return 0;
}

struct GenFlags {
  std::string family = "euclidean", problem = "ckm", out;
  int n = 8, m = 15, u = 3, cost_min = 1, cost_max = 20, k = 0, blobs = 0;
  double budget = -1.0, budget_scale = 1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int cmd_gen(const GenFlags& f) {
  GenParams p;
  p.family = parse_family(f.family);
  p.problem = parse_problem(f.problem);
  p.n_facilities = f.n;
  p.n_clients = f.m;
  p.capacity = f.u;
  p.cost_min = f.cost_min;
  p.cost_max = f.cost_max;
  p.k = f.k;
  p.budget_scale = f.budget_scale;
  p.blobs = f.blobs;
  if (f.budget >= 0) {
    p.budget_opt_feasible = false;
    p.budget = f.budget;
  }
  p.seed = f.seed_set ? f.seed : default_seed(1);
  std::ostringstream ss;
  save_instance(generate(p), ss);
  write_text(f.out, ss.str());
  return 0;
}

int cmd_oracle(const std::string& input, const std::string& problem, int k) {
  const Instance inst = load_for(input, problem, k);
  const ExactResult r = exact_solve(inst);
  std::cout << "opt " << format_number(r.cost) << "\nopen";
  for (int i : r.open) std::cout << ' ' << i;
  std::cout << "\nassignment";
  for (int i : r.assignment) std::cout << ' ' << i;
  std::cout << '\n';
  return 0;
}

struct ReportFlags {
  std::string input, problem, clusters, dot, lp;
  double eps = 1.0;
  int k = 0;
};

int cmd_report(const ReportFlags& f) {
  const Instance inst = load_for(f.input, f.problem, f.k);
  const int l = inst.problem() == Problem::kCflp ? 2 : l_from_eps(f.eps);
  if (!f.lp.empty()) write_text(f.lp, build_natural_lp(inst).to_lp_format());
  const FractionalSolution sol = solve_natural_lp(inst);
  const ClusterSet cs = make_clusters(inst, sol, l);
  write_text(f.clusters, clusters_csv(cs));
  if (!f.dot.empty()) write_text(f.dot, hierarchy_dot(cs, build_hierarchy(inst, cs)));
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Capacitated facility location and knapsack median by LP rounding"};
  app.require_subcommand(1);

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "Solve one instance and write a metrics row");
  solve->add_option("--problem", sf.problem, "ckm, cflp or ckflp (default: from file)");
  solve->add_option("--eps", sf.eps, "Accuracy parameter")->required();
  solve->add_option("--input", sf.input, "Instance file")->required();
  solve->add_option("--k", sf.k, "Cardinality for ckflp");
  solve->add_option("--assign", sf.assign, "fractional or integral");
  solve->add_option("--out", sf.out, "Metrics CSV (default: stdout)");
  solve->add_option("--manifest", sf.manifest, "Run manifest JSON");
  solve->add_flag("--oracle", sf.oracle, "Fill the opt column by enumeration");

  GenFlags gf;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--family", gf.family, "euclidean, matrix or clustered");
  gen->add_option("--budget-scale", gf.budget_scale, "Multiplier on the covering budget");
  gen->add_option("--blobs", gf.blobs, "Blob count for the clustered family");
  gen->add_option("--problem", gf.problem, "ckm, cflp or ckflp");
  gen->add_option("--facilities", gf.n, "Number of facilities");
  gen->add_option("--clients", gf.m, "Number of clients");
  gen->add_option("--capacity", gf.u, "Uniform capacity");
  gen->add_option("--cost-min", gf.cost_min, "Smallest facility cost");
  gen->add_option("--cost-max", gf.cost_max, "Largest facility cost");
  gen->add_option("--budget", gf.budget, "Fixed budget (default: cheapest covering set)");
  gen->add_option("--k", gf.k, "Cardinality (default: ceil(clients/capacity))");
  auto* seed_opt = gen->add_option("--seed", gf.seed, "Seed (default: CAPROUND_SEED or 1)");
  gen->add_option("--out", gf.out, "Output file (default: stdout)");

  std::string oracle_input, oracle_problem;
  int oracle_k = 0;
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
  oracle->add_option("--input", oracle_input, "Instance file")->required();
  oracle->add_option("--problem", oracle_problem, "ckm, cflp or ckflp");
  oracle->add_option("--k", oracle_k, "Cardinality for ckflp");

  BenchConfig bc;
  std::string bench_problem = "ckm", eps_list = "1", sizes = "8x15", bench_out,
              bench_assign = "fractional";
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Solve a grid of generated instances");
  bench->add_option("--problem", bench_problem, "ckm, cflp or ckflp");
  bench->add_option("--eps-list", eps_list, "Comma-separated eps values");
  bench->add_option("--seeds", bc.seeds, "Seeds per size");
  bench->add_option("--sizes", sizes, "Comma-separated NxM sizes");
  bench->add_option("--capacity", bc.capacity, "Uniform capacity");
  std::string bench_family = "clustered";
  bench->add_option("--family", bench_family, "euclidean, matrix or clustered");
  bench->add_option("--budget-scale", bc.budget_scale, "Multiplier on the covering budget");
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "First seed");
  bench->add_option("--assign", bench_assign, "fractional or integral");
  bench->add_option("--oracle-max", bc.oracle_max, "Largest facility count for the oracle");
  bench->add_option("--out", bench_out, "CSV file (default: stdout)");

  ReportFlags rf;
  auto* report = app.add_subcommand("report", "Dump clusters, hierarchy and relaxation");
  report->add_option("--input", rf.input, "Instance file")->required();
  report->add_option("--problem", rf.problem, "ckm, cflp or ckflp");
  report->add_option("--eps", rf.eps, "Accuracy parameter");
  report->add_option("--k", rf.k, "Cardinality for ckflp");
  report->add_option("--clusters", rf.clusters, "Clusters CSV (default: stdout)");
  report->add_option("--dot", rf.dot, "Hierarchy in Graphviz format");
  report->add_option("--lp", rf.lp, "Relaxation in LP format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*solve) return cmd_solve(sf);
    if (*gen) {
      gf.seed_set = seed_opt->count() > 0;
      return cmd_gen(gf);
    }
    if (*oracle) return cmd_oracle(oracle_input, oracle_problem, oracle_k);
    if (*bench) {
      bc.problem = parse_problem(bench_problem);
      bc.family = parse_family(bench_family);
      bc.eps = parse_eps_list(eps_list);
      bc.sizes = parse_sizes(sizes);
      bc.assign = parse_assign(bench_assign);
      bc.base_seed = bench_seed_opt->count() > 0 ? bench_seed : default_seed(1);
      const BenchOutcome r = run_bench(bc);
      write_text(bench_out, r.csv);
      if (r.failed_verdicts > 0) return 2;
      return r.errors > 0 ? 1 : 0;
    }
    if (*report) return cmd_report(rf);
  } catch (const BoundViolation& e) {
    std::cerr << "bound violated: " << e.check() << "\n  witness: " << e.witness() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace capround
