#pragma once

#include <string>
#include <vector>

#include "qsp/cubic_matrix.hpp"
#include "qsp/qsp_families.hpp"

namespace qsp {

/// Point of the probability simplex: entries nonnegative, summing to 1
/// within 1e-12.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    /// Accepts raw step output: entries in [-1e-12, 0) are clamped to 0 and
    /// the vector renormalized, provided the total is within 1e-12 of 1.
    /// Larger violations are errors, never silently repaired.
    static Distribution from_raw(std::vector<double> raw);

    static Distribution uniform(int m);

    int dim() const { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return p_; }

private:
    struct Raw {};
    Distribution(std::vector<double> probs, Raw);
    std::vector<double> p_;
};

double max_abs_diff(const Distribution& a, const Distribution& b);

/// Offspring rule for 3-stochastic transitions:
/// x'_k = sum_{i,j} P(i,j,k) x_i x_j.
Distribution step_quadratic(const CubicMatrix& p, const Distribution& x, double tol = 1e-12);

/// Splitting rule for (1,2)-stochastic transitions:
/// x'_k = (1/2) sum_{i,j} (P(k,i,j) + P(i,k,j)) x_j.
Distribution step_linear_12(const CubicMatrix& p, const Distribution& x, double tol = 1e-12);

/// Applies the step rule selected by the matrix kind.
Distribution step(const CubicMatrix& p, StochKind kind, const Distribution& x, double tol = 1e-12);

struct Trajectory {
    std::string family;
    double s0 = 0.0;
    std::vector<double> times;
    std::vector<Distribution> states;
};

/// One-shot transition semantics: each reported state is M^[s0, t_i] applied
/// to x0. Times must be strictly increasing and above s0.
Trajectory trajectory(const CubicProcessFamily& family, const Distribution& x0, double s0,
                      const std::vector<double>& times);

/// Iterated variant that re-bases s at each step, feeding M^[t_{i-1}, t_i]
/// the previous state. This is a different law from the one-shot transition
/// above; use it only when chained transitions are what you mean.
Trajectory trajectory_rebased(const CubicProcessFamily& family, const Distribution& x0, double s0,
                              const std::vector<double>& times);

/// The stable distribution (A(s), 1-A(s)) with A = (g + u11 + u21)/2 that an
/// m1 process reaches as soon as t > s.
Distribution closed_form_m1(const M1Params& params, double s);

/// The limit distribution of an m2 process started at (s, x_s); requires a
/// declared psi limit.
Distribution closed_form_m2_limit(const M2Params& params, double s, const Distribution& x_s);

}  // namespace qsp
