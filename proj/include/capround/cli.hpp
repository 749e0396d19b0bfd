#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "capround/ckm.hpp"

namespace capround {

// Dispatches on the instance's problem.
RoundedSolution solve_problem(const Instance& inst, const SolveOptions& opt);

// CAPROUND_SEED when set, otherwise `fallback`.
std::uint64_t default_seed(std::uint64_t fallback = 1);

struct BenchConfig {
  Problem problem = Problem::kCkm;
  std::vector<double> eps{1.0};
  int seeds = 5;
  std::vector<std::pair<int, int>> sizes{{8, 15}};   // (facilities, clients)
  int capacity = 3;
  Family family = Family::kClustered;
  double budget_scale = 1.0;
  std::uint64_t base_seed = 1;
  AssignMode assign = AssignMode::kFractional;
  int oracle_max = 12;                               // facilities
};

struct BenchOutcome {
  std::string csv;
  int rows = 0;
  int failed_verdicts = 0;
  int errors = 0;
};

// One row per (size, seed, eps), in that order.
BenchOutcome run_bench(const BenchConfig& cfg);

// Entry point of the command-line tool. Returns the process exit code:
// 0 success, 1 operational error, 2 a bound failed on the input.
int run_cli(int argc, char** argv);

}  // namespace capround
