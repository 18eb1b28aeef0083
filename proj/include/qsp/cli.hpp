#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsp/population_twins.hpp"
#include "qsp/qsp_families.hpp"

namespace qsp::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitEvalError = 3;

struct GridSpec {
    double t_max = 5.0;
    int points = 12;
    std::vector<double> extra;
};

struct SimSpec {
    std::vector<double> x0;
    double s0 = 0.0;
    std::vector<double> times;
};

struct LayerSpec {
    std::string family;
    std::map<std::string, TimeFunction> params;
};

/// Fully validated run configuration: family exists, every expression is
/// parsed, the grid is valid.
struct RunConfig {
    std::string family;
    std::map<std::string, TimeFunction> params;
    std::vector<LayerSpec> layers;  // direct_sum only
    std::optional<StochKind> kind_override;
    GridSpec grid;
    double kce_tol = 1e-9;
    double stoch_tol = 1e-12;
    bool strict = false;
    std::optional<SimSpec> sim;
    std::optional<std::string> report_path;
};

struct RunOutcome {
    int exit_code = kExitPass;
    nlohmann::json report;
    std::vector<std::string> files;  // everything written
};

/// Loads and validates a JSON config. Throws ConfigError with the offending
/// field path; expression errors carry the parse position.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

/// A family built by name. Exactly one of square/cubic/twin is set; for twin
/// families `cubic_view()` exposes the underlying process.
struct BuiltFamily {
    std::optional<SquareProcessFamily> square;
    std::optional<CubicProcessFamily> cubic;
    std::optional<TwinFamily> twin;

    bool is_square() const { return square.has_value(); }
    const CubicProcessFamily& cubic_view() const;
    const std::vector<std::string>& warnings() const;
};

BuiltFamily build_family(const RunConfig& cfg);

/// Stochasticity sweep + Kolmogorov-Chapman sweep (+ the nine-equation system
/// for twin families). Writes the JSON report when the config names a path.
RunOutcome run_verify(const RunConfig& cfg);

/// One-shot trajectory from the simulation block, written as CSV.
RunOutcome run_simulate(const RunConfig& cfg, const std::string& out_csv);

/// Evaluates the family matrix at (s,t) and writes it to out_path
/// (JSON when the path ends in .json, plain text otherwise).
RunOutcome run_eval(const RunConfig& cfg, double s, double t, const std::string& out_path);

/// Catalog of family names with parameter signatures and constraints.
std::string list_families();

}  // namespace qsp::cli
