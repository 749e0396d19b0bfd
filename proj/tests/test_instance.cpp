#include <doctest.h>

#include <sstream>

#include "capround/instance.hpp"
#include "support.hpp"

using namespace capround;
using testsupport::dump;
using testsupport::tiny_a;

namespace {

Instance parse(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

}  // namespace

TEST_CASE("degenerate point: co-located facility and client") {
  const Instance inst = parse(
      "CAPKM v1\nproblem ckm\nfacilities 1\nclients 1\ncapacity 1\nbudget 0\n"
      "fcost 0\nmetric matrix\n0 0\n0 0\n");
  CHECK(inst.num_facilities() == 1);
  CHECK(inst.num_clients() == 1);
  CHECK(inst.fc(0, 0) == 0.0);
  CHECK(inst.budget() == 0.0);
}

TEST_CASE("asymmetric matrix is rejected") {
  CHECK_THROWS_AS(parse("CAPKM v1\nproblem ckm\nfacilities 1\nclients 1\ncapacity 1\n"
                        "budget 0\nfcost 0\nmetric matrix\n0 5\n4 0\n"),
                  MetricError);
}

TEST_CASE("triangle violation is rejected") {
  CHECK_THROWS_AS(parse("CAPKM v1\nproblem cflp\nfacilities 1\nclients 2\ncapacity 2\n"
                        "fcost 0\nmetric matrix\n0 1 1\n1 0 5\n1 5 0\n"),
                  MetricError);
}

TEST_CASE("malformed files raise parse errors") {
  CHECK_THROWS_AS(parse("CAPKM v2\n"), ParseError);
  CHECK_THROWS_AS(parse("CAPKM v1\nproblem ckm\nfacilities 2\n"), ParseError);
  CHECK_THROWS_AS(parse("CAPKM v1\nproblem ckm\nfacilities 1\nclients 1\ncapacity 1\n"
                        "budget 0\nfcost -1\nmetric matrix\n0 0\n0 0\n"),
                  ParseError);
}

TEST_CASE("tiny line instance distances") {
  const Instance inst = tiny_a();
  CHECK(inst.num_facilities() == 2);
  CHECK(inst.num_clients() == 3);
  CHECK(inst.capacity() == 2);
  CHECK(inst.budget() == 2.0);
  CHECK(inst.fc(0, 1) == 1.0);
  CHECK(inst.fc(1, 1) == 9.0);
  CHECK(inst.cc(0, 2) == 10.0);
}

TEST_CASE("generate a single facility and client") {
  GenParams gp;
  gp.n_facilities = 1;
  gp.n_clients = 1;
  gp.capacity = 1;
  gp.seed = 7;
  const Instance inst = generate(gp);
  CHECK(inst.num_points() == 2);
  for (double c : inst.coordinates()) {
    CHECK(c >= 0.0);
    CHECK(c <= gp.coord_range);
  }
}

TEST_CASE("generation is deterministic per seed") {
  for (auto fam : {Family::kEuclidean, Family::kUniformMatrix, Family::kClustered}) {
    GenParams gp;
    gp.family = fam;
    gp.n_facilities = 8;
    gp.n_clients = 15;
    gp.capacity = 3;
    gp.seed = 42;
    CHECK(dump(generate(gp)) == dump(generate(gp)));
    GenParams other = gp;
    other.seed = 43;
    CHECK(dump(generate(gp)) != dump(generate(other)));
  }
}

TEST_CASE("covering budget is impossible without enough capacity") {
  GenParams gp;
  gp.n_facilities = 4;
  gp.n_clients = 20;
  gp.capacity = 4;
  gp.seed = 1;
  CHECK_THROWS_AS(generate(gp), InfeasibleError);
}

TEST_CASE("covering budget buys the cheapest facilities") {
  CHECK(opt_feasible_budget({5, 1, 3, 2}, 5, 2) == doctest::Approx(6.0));
  CHECK(opt_feasible_budget({5, 1, 3, 2}, 2, 2) == doctest::Approx(1.0));
}

TEST_CASE("generated instances satisfy the triangle inequality") {
  for (auto fam : {Family::kEuclidean, Family::kUniformMatrix, Family::kClustered}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GenParams gp;
      gp.family = fam;
      gp.n_facilities = 6;
      gp.n_clients = 10;
      gp.capacity = 3;
      gp.seed = seed;
      const Instance inst = generate(gp);
      const int N = inst.num_points();
      for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
          for (int c = 0; c < N; ++c) {
            REQUIRE(inst.point_dist(a, c) <=
                    inst.point_dist(a, b) + inst.point_dist(b, c) + 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("save and load round trip is exact") {
  for (auto fam : {Family::kEuclidean, Family::kUniformMatrix, Family::kClustered}) {
    for (auto p : {Problem::kCkm, Problem::kCflp, Problem::kCkflp}) {
      GenParams gp;
      gp.family = fam;
      gp.problem = p;
      gp.n_facilities = 5;
      gp.n_clients = 9;
      gp.capacity = 3;
      gp.seed = 11;
      const Instance inst = generate(gp);
      const std::string text = dump(inst);
      const Instance back = parse(text);
      CHECK(dump(back) == text);
      for (int a = 0; a < inst.num_points(); ++a) {
        for (int b = 0; b < inst.num_points(); ++b) {
          REQUIRE(back.point_dist(a, b) == inst.point_dist(a, b));
        }
      }
    }
  }
}

TEST_CASE("restricting facilities keeps the metric") {
  const Instance inst = tiny_a();
  const Instance r = inst.restrict_facilities({1});
  CHECK(r.num_facilities() == 1);
  CHECK(r.fc(0, 0) == 10.0);
  CHECK(r.facility_cost(0) == 1.0);
}
