#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qsp/cubic_matrix.hpp"
#include "qsp/grid.hpp"
#include "qsp/stoch.hpp"
#include "qsp/timefn.hpp"

namespace qsp {

/// Identity of a constructed family: name, pretty-printed parameters,
/// piecewise switch points, and any construction-time advisories.
struct FamilyDescriptor {
    std::string name;
    int m = 2;
    std::map<std::string, std::string> params;
    std::vector<double> cutoffs;
    std::vector<std::string> warnings;
};

/// Two-parameter family of square matrices (s,t) -> U^{[s,t]}, defined for
/// 0 <= s < t <= horizon. Immutable; evaluation is pure.
class SquareProcessFamily {
public:
    SquareProcessFamily(FamilyDescriptor desc, std::vector<StochKind> kinds, double horizon,
                        std::function<SquareMatrix(double, double)> eval);

    int dim() const { return m_; }
    double horizon() const { return horizon_; }
    const FamilyDescriptor& descriptor() const { return desc_; }
    const std::vector<StochKind>& declared_kinds() const { return kinds_; }
    bool declares(StochKind kind) const;

    SquareMatrix operator()(double s, double t) const;

private:
    FamilyDescriptor desc_;
    std::vector<StochKind> kinds_;
    double horizon_;
    int m_;
    std::function<SquareMatrix(double, double)> eval_;
};

// The seven explicit 2x2 families. Parameter-function claims are validated by
// sampling on the options horizon; a failed claim raises ConstructionError
// naming the claim and a counterexample.

/// Columns (g(s), 1-g(s)); left stochastic, independent of t. g in [0,1].
SquareProcessFamily q1(const TimeFunction& g, const ValidationOptions& opts = {});

/// (1/2)[[1+r, 1-r],[1-r, 1+r]] with r = psi(t)/psi(s); doubly stochastic.
/// psi positive decreasing.
SquareProcessFamily q2(const TimeFunction& psi, const ValidationOptions& opts = {});

/// Identity while t < b, constant (1/2) ones once t >= b; doubly stochastic.
SquareProcessFamily q3(double b_cutoff, const ValidationOptions& opts = {});

/// [[1, 0],[1-r, r]] with r = psi(t)/psi(s); right stochastic. psi positive
/// decreasing.
SquareProcessFamily q4(const TimeFunction& psi, const ValidationOptions& opts = {});

/// Rows (f(t), 1-f(t)); right stochastic, independent of s. f in [0,1].
SquareProcessFamily q5(const TimeFunction& f, const ValidationOptions& opts = {});

/// Rate-pair family with parameters 0 < 2*mu < lambda (strict) and theta
/// positive decreasing; right stochastic.
SquareProcessFamily q6(double lambda, double mu, const TimeFunction& theta,
                       const ValidationOptions& opts = {});

/// Identity while t < a, rows (g(t), 1-g(t)) once t >= a; right stochastic.
SquareProcessFamily q7(double a_cutoff, const TimeFunction& g, const ValidationOptions& opts = {});

/// Max-norm residual of U^{[s,t]} - U^{[s,tau]} U^{[tau,t]} over every grid
/// triple s < tau < t.
VerificationReport kce_residual_square(const SquareProcessFamily& family, const TimeGrid& grid,
                                       double tol = 1e-9);

}  // namespace qsp
