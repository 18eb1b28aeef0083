#pragma once

#include <string>
#include <vector>

#include "qsp/cubic_matrix.hpp"

namespace qsp {

/// Stochasticity kinds. The first five apply to cubic matrices, the last
/// three to square matrices. Each maps to exactly one summation rule.
enum class StochKind {
    OneTwo,           // sum over (i,j) equals 1 for each k
    OneThree,         // sum over (i,k) equals 1 for each j
    TwoThree,         // sum over (j,k) equals 1 for each i
    Three,            // sum over k equals 1 for each (i,j)
    TwiceStochastic,  // TwoThree plus: sum over i equals 1/m for each (j,k)
    Left,             // column sums equal 1
    Right,            // row sums equal 1
    Doubly,           // row and column sums equal 1
};

std::string kind_name(StochKind kind);
StochKind kind_from_name(const std::string& name);
bool is_cubic_kind(StochKind kind);

/// Outcome of a stochasticity check. `sum_deviations` holds |sum - target|
/// for every defining sum, in slice order (for TwiceStochastic and Doubly the
/// two sum groups are concatenated).
struct StochResult {
    bool ok = false;
    double max_sum_deviation = 0.0;
    double min_entry = 0.0;
    std::vector<double> sum_deviations;
};

/// Cubic predicate: entries >= -tol and the kind's defining sums within tol
/// of the target (1, or 1/m for the TwiceStochastic extra condition).
/// Square kinds are rejected.
StochResult is_stochastic(const CubicMatrix& q, StochKind kind, double tol = 1e-12);

/// Square predicate for Left / Right / Doubly; cubic kinds are rejected.
StochResult is_square_stochastic(const SquareMatrix& u, StochKind kind, double tol = 1e-12);

}  // namespace qsp
