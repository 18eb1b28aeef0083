#pragma once

#include <string>

#include <json.hpp>

#include "qsp/cubic_matrix.hpp"
#include "qsp/evolution.hpp"
#include "qsp/grid.hpp"
#include "qsp/population_twins.hpp"

namespace qsp {

// Cubic matrices serialize as {"m": m, "entries": [m^3 numbers]} with the
// flat layout offset = i*m^2 + j*m + k, and as plain text: m on the first
// line, then m^3 whitespace-separated numbers in the same order.

nlohmann::json cubic_to_json(const CubicMatrix& q);
CubicMatrix cubic_from_json(const nlohmann::json& j);
std::string cubic_to_text(const CubicMatrix& q);
CubicMatrix cubic_from_text(const std::string& text);

nlohmann::json square_to_json(const SquareMatrix& u);
SquareMatrix square_from_json(const nlohmann::json& j);
std::string square_to_text(const SquareMatrix& u);

/// CSV with header "t,x0,...,x{m-1}", one row per time, 17 significant
/// digits, newline-terminated.
std::string trajectory_to_csv(const Trajectory& tr);

nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json report_to_json(const NineEquationReport& report);

nlohmann::json twin_report_to_json(const TwinReport& report);
std::string twin_report_csv_header();
std::string twin_report_csv_row(const TwinReport& report);

}  // namespace qsp
