#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsp/cubic_matrix.hpp"
#include "qsp/grid.hpp"
#include "qsp/markov_square.hpp"
#include "qsp/products.hpp"
#include "qsp/stoch.hpp"
#include "qsp/timefn.hpp"

namespace qsp {

/// Which cubic-matrix product the family's Kolmogorov-Chapman equation uses.
enum class ProductKind {
    Maksimov0,  // c_ijr = sum_k a_ijk b_kjr
    MaksimovA,  // product driven by an associative index operation
};

/// Two-parameter family of cubic matrices (s,t) -> M^{[s,t]} for
/// 0 <= s < t <= horizon, tagged with its stochasticity kind and product.
/// Immutable; evaluation is pure and thread-safe.
class CubicProcessFamily {
public:
    CubicProcessFamily(FamilyDescriptor desc, StochKind kind, ProductKind product,
                       std::optional<BinaryOpTable> op, double horizon,
                       std::function<CubicMatrix(double, double)> eval);

    int dim() const { return desc_.m; }
    double horizon() const { return horizon_; }
    const FamilyDescriptor& descriptor() const { return desc_; }
    StochKind declared_kind() const { return kind_; }
    ProductKind product() const { return product_; }
    const BinaryOpTable& op_table() const;

    CubicMatrix operator()(double s, double t) const;
    /// Multiplies with the family's own product.
    CubicMatrix apply_product(const CubicMatrix& a, const CubicMatrix& b) const;

private:
    FamilyDescriptor desc_;
    StochKind kind_;
    ProductKind product_;
    std::optional<BinaryOpTable> op_;
    double horizon_;
    std::function<CubicMatrix(double, double)> eval_;
};

/// Family of invertible square matrices t -> A^{[t]} with numerically
/// computed inverses. Construction samples the determinant over the horizon
/// and rejects flows that come within det_floor of singular.
class MatrixFlow {
public:
    MatrixFlow(FamilyDescriptor desc, double horizon, std::function<SquareMatrix(double)> eval,
               const ValidationOptions& opts = {}, double det_floor = 1e-10);

    int dim() const { return desc_.m; }
    double horizon() const { return horizon_; }
    double det_floor() const { return det_floor_; }
    const FamilyDescriptor& descriptor() const { return desc_; }

    SquareMatrix at(double t) const;
    SquareMatrix inverse_at(double t) const;

private:
    FamilyDescriptor desc_;
    double horizon_;
    double det_floor_;
    std::function<SquareMatrix(double)> eval_;
};

struct M1Params {
    TimeFunction g, u11, u21;
};

struct M2Params {
    TimeFunction psi;
    TimeFunction zeta11, zeta21, gamma11, gamma21;
    std::optional<double> psi_limit;  // declared limit of psi at t -> infinity
};

struct M3Params {
    TimeFunction eta11, xi21;      // pre-cutoff branch, in [0,1]
    TimeFunction kappa11, kappa21; // post-cutoff branch, in [0, 1/2]
    double cutoff = 1.0;
};

struct NParams {
    TimeFunction a, b;                      // flow entries, in (0,1) with a+b > 1
    TimeFunction alpha, beta, gamma, delta; // splitting functions of s
};

/// 3-stochastic family under the 0-product assembled from m right-stochastic
/// square families, one per middle-index layer. Each layer must declare right
/// stochasticity and pass the square KCE on a validation grid.
CubicProcessFamily direct_sum_30(const std::vector<SquareProcessFamily>& layers,
                                 const ValidationOptions& opts = {});

/// t-independent 2x2x2 family; requires 0 <= u11 <= g and 0 <= u21 <= 1-g.
CubicProcessFamily m1_family(const M1Params& params, const ValidationOptions& opts = {});

/// 2x2x2 family driven by a positive decreasing psi; the gamma functions must
/// stay inside the (s,t) feasibility bands at every sampled pair.
CubicProcessFamily m2_family(const M2Params& params, const ValidationOptions& opts = {});

/// Piecewise 2x2x2 family: sparse branch before the cutoff, averaged branch
/// from it on. Requires eta11, xi21 in [0,1] and kappa11, kappa21 in [0,1/2].
/// When kappa11 != eta11/2 or kappa21 != xi21/2 the two branches are not
/// coupled consistently and cutoff-straddling triples carry a nonzero
/// residual; construction records a warning instead of failing.
CubicProcessFamily m3_family(const M3Params& params, const ValidationOptions& opts = {});

/// 2x2 flow [[a(t), 1-b(t)], [1-a(t), b(t)]] with a,b in (0,1), either both
/// increasing with a+b > 1 or both decreasing with a+b < 1.
MatrixFlow p3_flow(const TimeFunction& a, const TimeFunction& b, const ValidationOptions& opts = {});

/// beta_ijk(s) evaluated as a cubic matrix.
using BetaProvider = std::function<CubicMatrix(double)>;

/// The equal split beta_ijk(s) = a^{[s]}_ik / m.
BetaProvider equal_split_beta(const MatrixFlow& flow);

/// The eight 2x2x2 beta entries assembled from (alpha, beta, gamma, delta).
BetaProvider beta_from_n_params(const NParams& params);

/// (1,2)-stochastic family P_ijr = sum_k beta_ijk(s) * (A^{[t]})^{-1}_kr.
/// Validates: (i) A^{[s]}(A^{[t]})^{-1} left stochastic at sampled pairs;
/// (ii) sum_j beta_ijk(s) = a^{[s]}_ik within 1e-9 and the assembled entries
/// nonnegative down to -1e-12 at sampled pairs.
CubicProcessFamily theorem_a_family(const MatrixFlow& flow, const BetaProvider& beta,
                                    const ValidationOptions& opts = {});
/// Same with the equal split.
CubicProcessFamily theorem_a_family(const MatrixFlow& flow, const ValidationOptions& opts = {});

/// Closed-form 2x2x2 family over the flow p3_flow(a, b); requires
/// 0 <= alpha <= a, 0 <= beta <= 1-b, 0 <= gamma <= 1-a, 0 <= delta <= b.
CubicProcessFamily n_family(const NParams& params, const ValidationOptions& opts = {});

/// Max-norm residual of M^{[s,t]} - M^{[s,tau]} * M^{[tau,t]} under the
/// family's product, over every grid triple.
VerificationReport kce_residual_cubic(const CubicProcessFamily& family, const TimeGrid& grid,
                                      double tol = 1e-9);

enum class TimeDependenceKind { Homogeneous, PeriodicInS, PeriodicInT, General };

struct TimeDependence {
    TimeDependenceKind kind = TimeDependenceKind::General;
    double period = 0.0;  // set for the periodic kinds
    std::size_t comparisons = 0;
};

/// Grid-based classification. Homogeneity compares shifted pairs for every
/// grid spacing; periodicity scans the supplied candidate periods, or the
/// grid spacing set when none are given. Reports candidates, not proofs.
TimeDependence classify_time_dependence(const CubicProcessFamily& family, const TimeGrid& grid,
                                        const std::vector<double>& candidate_periods = {},
                                        double tol = 1e-9);

}  // namespace qsp
