#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "capround/ckm.hpp"

namespace capround {

// Metrics CSV. ckflp rows carry two extra columns, k and cardinality_used.
std::string csv_header(Problem problem);
std::string csv_row(const std::string& instance, const RoundedSolution& sol,
                    std::optional<double> opt);

// Full run record: metrics, verdicts, meta-cluster summaries, iteration
// history, guesses and every check with its worst margin.
nlohmann::json run_manifest(const std::string& instance,
                            const RoundedSolution& sol,
                            std::optional<double> opt);

// Fixed-precision number formatting shared by the CSV writers.
std::string format_number(double v);

}  // namespace capround
