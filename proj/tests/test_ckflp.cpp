#include <doctest.h>

#include "capround/ckflp.hpp"
#include "capround/oracle.hpp"
#include "support.hpp"

using namespace capround;

TEST_CASE("free facilities and full cardinality reduce to assignment") {
  Instance inst = testsupport::line_instance(Problem::kCkflp, {0, 0, 0}, {0, 20, 40},
                                             {0, 0, 20, 40, 40}, 2);
  inst.set_k(3);
  const RoundedSolution s = solve_ckflp(inst, {1.0, AssignMode::kIntegral});
  const ExactResult opt = exact_ckflp(inst);
  CHECK(opt.cost == 0.0);
  CHECK(s.cost == doctest::Approx(opt.cost));
  CHECK(s.verdict());
}

TEST_CASE("tiny line instance with two facilities") {
  const Instance inst = testsupport::tiny_a(Problem::kCkflp);
  const RoundedSolution s = solve_ckflp(inst, {1.0, AssignMode::kIntegral});
  CHECK(s.cardinality_used <= 2);
  CHECK(s.max_load_over_u <= 3.0 + 1e-7);
  CHECK(s.verdict());
  const ExactResult opt = exact_ckflp(inst);
  CHECK(opt.cost >= s.lp_opt - 1e-9);
  CHECK(s.cost <= s.cost_bound + 1e-7);
}

TEST_CASE("one facility cannot hold every client") {
  Instance inst = testsupport::tiny_a(Problem::kCkflp);
  inst.set_k(1);
  CHECK_THROWS_AS(solve_ckflp(inst, {1.0, AssignMode::kFractional}), InfeasibleError);
  inst.set_k(0);
  CHECK_THROWS_AS(exact_ckflp(inst), InfeasibleError);
}

TEST_CASE("full sparse openings leave nothing to check") {
  long evaluated = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto gp = testsupport::clustered(8, 16, 6, seed, Problem::kCkflp);
    const Instance inst = generate(gp);
    const FractionalSolution sol = solve_natural_lp(inst);
    const ClusterSet cs = make_clusters(inst, sol, 2);
    const CenterForest f = build_forest(inst, cs);
    CheckLog log;
    const SparseOpening so = sparse_open_cheapest(inst, sol, cs, false, log);
    verify_property_iv(inst, sol, cs, f, so, log);
    const CheckRecord* r = log.find("sparse opening gap within eight cluster budgets");
    if (r != nullptr) {
      evaluated += r->evaluated;
      CHECK(r->failed == 0);
    }
    for (size_t k = 0; k < so.opening.size(); ++k) {
      if (so.facility[k] >= 0) CHECK(so.opening[k] == 1.0);
    }
  }
  CHECK(evaluated > 0);
}

TEST_CASE("random k-facility runs satisfy every bound") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto gp = testsupport::clustered(10, 20, 5, seed, Problem::kCkflp);
    gp.blobs = 8;
    const Instance inst = generate(gp);
    for (double eps : {1.0, 0.5}) {
      const RoundedSolution s = solve_ckflp(inst, {eps, AssignMode::kIntegral});
      INFO("seed ", seed, " eps ", eps);
      CHECK(s.verdict());
      CHECK(static_cast<int>(s.open.size()) <= inst.k());
      CHECK(s.max_load_over_u <= capacity_factor(s.l) + 1e-7);
      CHECK(s.cost <= s.cost_bound + 1e-7);
      const CheckRecord* r = s.checks.find("sparse opening gap within eight cluster budgets");
      if (r != nullptr) checked += static_cast<int>(r->evaluated);
      if (r != nullptr) CHECK(r->failed == 0);
    }
  }
  CHECK(checked > 0);
}
