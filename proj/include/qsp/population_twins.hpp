#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "qsp/grid.hpp"
#include "qsp/qsp_families.hpp"
#include "qsp/timefn.hpp"

namespace qsp {

// Population model on the type set {0,1,2} = {empty body, female, male}.
// M^[s,t](i,j,k) is the probability that a type-k parent, pregnant from s to
// t, produces offspring pair (i,j). Layers k=0 and k=2 are frozen to the
// pattern "entry (0,0) is 1, everything else 0"; all dynamics live in the
// middle layer.

enum class TwinBranch { ExtinctionA, SurvivalB, CataclysmC };

/// Whether pairwise survival conditions are only sampled on the grid or also
/// escalated when they cannot hold for all t > s (continuous 1/phi forces
/// b+c+u+v+w = 0 in the t -> s+ limit).
enum class TwinConditionMode { Grid, Strict };

struct TwinBParams {
    TimeFunction phi;  // positive; pair condition requires 1/phi nondecreasing
    TimeFunction b, c, u, v, w;
    TimeFunction alpha, beta;          // gamma is derived: 1/phi - alpha - beta
    std::optional<double> phi_limit;   // declared limit of phi at t -> infinity
};

struct TwinCParams {
    TimeFunction alpha0, beta0;  // in [0,1] with alpha0 + beta0 <= 1 before the cutoff
    double cutoff = 1.0;
};

struct TwinFamily {
    TwinBranch branch;
    CubicProcessFamily family;
    std::optional<TwinBParams> b_params;
    std::optional<TwinCParams> c_params;
};

/// Constant absorbing family: every parent produces no offspring and the
/// population dies as soon as t > s.
TwinFamily case_a_family(const ValidationOptions& opts = {});

/// Survival branch: middle-layer entries factor as (function of s) * phi(t).
TwinFamily case_b_family(const TwinBParams& params, TwinConditionMode mode = TwinConditionMode::Grid,
                         const ValidationOptions& opts = {});

/// Cataclysm branch: stable sparse matrix before the cutoff, extinction from
/// the cutoff on.
TwinFamily case_c_family(const TwinCParams& params, const ValidationOptions& opts = {});

struct EquationResidual {
    std::string equation;
    double max_residual = 0.0;
    double s = 0.0, tau = 0.0, t = 0.0;  // worst point (tau unused for the normalization row)
    std::size_t failures = 0;
};

/// Residuals of the middle-layer consistency system (one slot per scalar
/// equation) plus the per-pair normalization.
struct NineEquationReport {
    double tol = 1e-10;
    std::array<EquationResidual, 9> equations;
    EquationResidual normalization;
    double max_residual = 0.0;
    std::size_t failures = 0;

    bool pass() const { return failures == 0; }
};

/// Sweeps the nine middle-layer equations over grid triples and the
/// normalization over grid pairs. The family must have m=3 and the twin-model
/// sparsity pattern.
NineEquationReport verify_nine_equations(const CubicProcessFamily& family, const TimeGrid& grid,
                                         double tol = 1e-10);

enum class CantorEquation { First, Second };

/// Residuals of f(s,t) = f(s,tau) + f(tau,t) (First) or
/// f(s,t) = f(s,tau) * f(tau,t) (Second) over grid triples.
VerificationReport cantor_checks(const std::function<double(double, double)>& f, const TimeGrid& grid,
                                 CantorEquation which = CantorEquation::Second, double tol = 1e-12);

struct TwinReport {
    double s = 0.0, t = 0.0;
    double p_no_offspring = 0.0;
    double p_single_female = 0.0;
    double p_single_male = 0.0;
    double p_twin_ff = 0.0;
    double p_twin_mixed = 0.0;
    double p_twin_mm = 0.0;
    bool has_limits = false;  // true only when a phi limit was declared
    double limit_ff = 0.0;
    double limit_mixed = 0.0;
    double limit_mm = 0.0;
};

/// Reads the offspring probabilities at (s,t). For branch B with a declared
/// phi limit the report also carries the t -> infinity twin probabilities;
/// otherwise has_limits stays false (an explicit "no limit declared" outcome).
TwinReport twin_report(const TwinFamily& family, double s, double t);

}  // namespace qsp
