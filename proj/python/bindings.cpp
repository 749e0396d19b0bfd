#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>

#include "capround/cli.hpp"
#include "capround/instance.hpp"
#include "capround/oracle.hpp"
#include "capround/relaxation.hpp"
#include "capround/report.hpp"

namespace py = pybind11;
using namespace capround;

namespace {

Instance parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

std::string instance_text(const Instance& inst) {
  std::ostringstream out;
  save_instance(inst, out);
  return out.str();
}

Family family_of(const std::string& s) {
  if (s == "euclidean") return Family::kEuclidean;
  if (s == "matrix") return Family::kUniformMatrix;
  if (s == "clustered") return Family::kClustered;
  throw UsageError("unknown family '" + s + "'");
}

Instance generate_py(const std::string& problem, int facilities, int clients,
                     int capacity, std::uint64_t seed, const std::string& family,
                     double budget_scale, int k) {
  GenParams gp;
  gp.problem = parse_problem(problem);
  gp.family = family_of(family);
  gp.n_facilities = facilities;
  gp.n_clients = clients;
  gp.capacity = capacity;
  gp.seed = seed;
  gp.budget_scale = budget_scale;
  gp.k = k;
  return generate(gp);
}

RoundedSolution solve_py(const Instance& inst, double eps, const std::string& assign) {
  AssignMode mode;
  if (assign == "fractional") {
    mode = AssignMode::kFractional;
  } else if (assign == "integral") {
    mode = AssignMode::kIntegral;
  } else {
    throw UsageError("assign must be fractional or integral");
  }
  py::gil_scoped_release release;
  return solve_problem(inst, {eps, mode});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LP-rounding solvers for capacitated knapsack median and facility location";

  py::register_exception<Error>(m, "CaproundError", PyExc_RuntimeError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<BoundViolation>(m, "BoundViolation", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("problem", [](const Instance& i) { return to_string(i.problem()); })
      .def_property_readonly("num_facilities", &Instance::num_facilities)
      .def_property_readonly("num_clients", &Instance::num_clients)
      .def_property_readonly("capacity", &Instance::capacity)
      .def_property_readonly("budget", &Instance::budget)
      .def_property_readonly("k", &Instance::k)
      .def_property_readonly("facility_costs", &Instance::facility_costs)
      .def("distance", &Instance::fc, py::arg("facility"), py::arg("client"))
      .def("with_problem",
           [](const Instance& i, const std::string& p) {
             Instance c = i;
             c.set_problem(parse_problem(p));
             return c;
           })
      .def("with_budget",
           [](const Instance& i, double b) {
             Instance c = i;
             c.set_budget(b);
             return c;
           })
      .def("with_k",
           [](const Instance& i, int k) {
             Instance c = i;
             c.set_k(k);
             return c;
           })
      .def("to_text", &instance_text);

  m.def("load", &load_instance, py::arg("path"));
  m.def("parse", &parse_text, py::arg("text"));
  m.def("from_coordinates",
        [](const std::string& problem, std::vector<double> cost, int clients, int capacity,
           int dim, std::vector<double> coords) {
          return Instance::from_coordinates(parse_problem(problem), std::move(cost), clients,
                                            capacity, dim, std::move(coords));
        },
        py::arg("problem"), py::arg("facility_costs"), py::arg("clients"),
        py::arg("capacity"), py::arg("dim"), py::arg("coords"));
  m.def("generate", &generate_py, py::arg("problem") = "ckm", py::arg("facilities") = 8,
        py::arg("clients") = 15, py::arg("capacity") = 3, py::arg("seed") = 1,
        py::arg("family") = "euclidean", py::arg("budget_scale") = 1.0, py::arg("k") = 0);

  py::class_<RoundedSolution>(m, "Solution")
      .def_property_readonly("problem", [](const RoundedSolution& s) { return to_string(s.problem); })
      .def_readonly("eps", &RoundedSolution::eps)
      .def_readonly("l", &RoundedSolution::l)
      .def_readonly("open", &RoundedSolution::open)
      .def_readonly("integral_assignment", &RoundedSolution::integral)
      .def_readonly("cost", &RoundedSolution::cost)
      .def_readonly("connection_cost", &RoundedSolution::connection_cost)
      .def_readonly("facility_cost", &RoundedSolution::facility_cost)
      .def_readonly("lp_opt", &RoundedSolution::lp_opt)
      .def_readonly("budget_used", &RoundedSolution::budget_used)
      .def_readonly("fmax", &RoundedSolution::fmax)
      .def_readonly("max_load_over_u", &RoundedSolution::max_load_over_u)
      .def_readonly("frac_after_round", &RoundedSolution::frac_after_round)
      .def_readonly("alpha", &RoundedSolution::alpha)
      .def_readonly("cost_bound", &RoundedSolution::cost_bound)
      .def_readonly("ok_budget", &RoundedSolution::ok_budget)
      .def_readonly("ok_capacity", &RoundedSolution::ok_capacity)
      .def_readonly("ok_cost", &RoundedSolution::ok_cost)
      .def_property_readonly("verdict", &RoundedSolution::verdict)
      .def("assignment",
           [](const RoundedSolution& s) {
             // Rows are facilities, columns clients.
             std::vector<std::vector<double>> x(s.n, std::vector<double>(s.m));
             for (int i = 0; i < s.n; ++i) {
               for (int j = 0; j < s.m; ++j) x[i][j] = s.xbar[static_cast<size_t>(i) * s.m + j];
             }
             return x;
           })
      .def("failed_bounds", [](const RoundedSolution& s) { return s.checks.failed_bounds(); })
      .def("manifest",
           [](const RoundedSolution& s, const std::string& name, std::optional<double> opt) {
             return run_manifest(name, s, opt).dump(2);
           },
           py::arg("name") = "instance", py::arg("opt") = py::none())
      .def("csv_row",
           [](const RoundedSolution& s, const std::string& name, std::optional<double> opt) {
             return csv_row(name, s, opt);
           },
           py::arg("name") = "instance", py::arg("opt") = py::none());

  m.def("solve", &solve_py, py::arg("instance"), py::arg("eps"),
        py::arg("assign") = "fractional");
  m.def("lp_value", [](const Instance& i) { return solve_natural_lp(i).lp_opt; },
        py::arg("instance"));
  m.def("exact",
        [](const Instance& i) {
          const ExactResult r = exact_solve(i);
          py::dict d;
          d["cost"] = r.cost;
          d["open"] = r.open;
          d["assignment"] = r.assignment;
          return d;
        },
        py::arg("instance"));
  m.def("csv_header", [](const std::string& p) { return csv_header(parse_problem(p)); },
        py::arg("problem") = "ckm");
}
