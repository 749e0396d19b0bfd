#include "capround/report.hpp"

#include <cmath>
#include <sstream>

namespace capround {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt("%.10g", v);
}

namespace {

const char* flag(bool b) { return b ? "true" : "false"; }

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string csv_header(Problem problem) {
  std::string h =
      "instance,problem,eps,l,n_fac,n_cli,u,budget_or_k,lp_opt,opt,cost,ratio_vs_lp,"
      "budget_used,fmax,max_load_over_u,frac_after_round,alpha_l,ok_budget,"
      "ok_capacity,ok_cost";
  if (problem == Problem::kCkflp) h += ",k,cardinality_used";
  return h;
}

std::string csv_row(const std::string& instance, const RoundedSolution& s,
                    std::optional<double> opt) {
  std::ostringstream out;
  out << instance << ',' << to_string(s.problem) << ',' << format_number(s.eps) << ','
      << s.l << ',' << s.n << ',' << s.m << ',' << s.capacity << ','
      << format_number(s.budget_or_k) << ',' << format_number(s.lp_opt) << ','
      << (opt ? format_number(*opt) : std::string()) << ',' << format_number(s.cost)
      << ',' << (opt && s.lp_opt > 0 ? format_number(s.cost / s.lp_opt) : std::string())
      << ',' << format_number(s.budget_used) << ',' << format_number(s.fmax) << ','
      << format_number(s.max_load_over_u) << ',' << s.frac_after_round << ','
      << format_number(s.alpha) << ',' << flag(s.ok_budget) << ','
      << flag(s.ok_capacity) << ',' << flag(s.ok_cost);
  if (s.problem == Problem::kCkflp) {
    out << ',' << static_cast<long>(s.budget_or_k) << ',' << s.cardinality_used;
  }
  return out.str();
}

nlohmann::json run_manifest(const std::string& instance, const RoundedSolution& s,
                            std::optional<double> opt) {
  using nlohmann::json;
  json j;
  j["instance"] = instance;
  j["problem"] = to_string(s.problem);
  j["eps"] = s.eps;
  j["l"] = s.l;
  j["assign"] = s.assign == AssignMode::kIntegral ? "integral" : "fractional";
  j["n_fac"] = s.n;
  j["n_cli"] = s.m;
  j["u"] = s.capacity;
  j["budget_or_k"] = s.budget_or_k;
  j["lp_opt"] = s.lp_opt;
  j["opt"] = opt ? json(*opt) : json(nullptr);
  j["cost"] = s.cost;
  j["connection_cost"] = s.connection_cost;
  j["facility_cost"] = s.facility_cost;
  if (s.assign == AssignMode::kIntegral) {
    j["integral_connection_cost"] = s.integral_connection_cost;
    j["max_integral_load"] = s.max_integral_load;
    j["integral_assignment"] = s.integral;
  }
  j["cost_bound"] = s.cost_bound;
  j["alpha_l"] = s.alpha;
  j["witness_cost"] = s.witness_cost;
  j["budget_used"] = s.budget_used;
  j["fmax"] = s.fmax;
  j["cardinality_used"] = s.cardinality_used;
  j["max_load_over_u"] = s.max_load_over_u;
  j["frac_after_round"] = s.frac_after_round;
  j["open"] = s.open;
  j["num_centers"] = s.num_centers;
  j["verdict"] = {{"ok_budget", s.ok_budget},
                  {"ok_capacity", s.ok_capacity},
                  {"ok_cost", s.ok_cost},
                  {"bounds_hold", s.checks.all_bounds_hold()}};

  json mcs = json::array();
  for (const auto& mc : s.mcs) {
    mcs.push_back({{"root_center", mc.root_center},
                   {"size", mc.size},
                   {"gamma", mc.gamma},
                   {"g2_requirement", mc.g2_requirement},
                   {"beta", mc.beta},
                   {"residual_case2", mc.residual_case2},
                   {"opened", mc.opened},
                   {"facility_less", mc.facility_less}});
  }
  j["meta_clusters"] = mcs;

  json iters = json::array();
  for (const auto& it : s.iterations) {
    iters.push_back({{"active", it.active},
                     {"fractional", it.fractional},
                     {"fixed_zero", it.fixed_zero},
                     {"fixed_one", it.fixed_one},
                     {"retired", it.retired},
                     {"cost", it.cost}});
  }
  j["iterations"] = iters;

  json guesses = json::array();
  for (const auto& g : s.guesses) {
    guesses.push_back({{"fmax", g.fmax}, {"status", g.status}, {"cost", g.cost}});
  }
  j["guesses"] = guesses;

  json checks = json::array();
  for (const auto& c : s.checks.records()) {
    checks.push_back({{"name", c.name},
                      {"severity", c.severity == Severity::kBound ? "bound" : "diagnostic"},
                      {"evaluated", c.evaluated},
                      {"failed", c.failed},
                      {"worst_margin", number_or_null(c.worst_margin)},
                      {"first_witness", c.first_witness}});
  }
  j["checks"] = checks;
  return j;
}

}  // namespace capround
