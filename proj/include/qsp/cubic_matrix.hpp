#pragma once

#include <vector>

namespace qsp {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 8;

class CubicMatrix;

/// Dense m x m square matrix of finite reals, indexed (i,k), 0-based.
class SquareMatrix {
public:
    SquareMatrix(int m, std::vector<double> entries);

    static SquareMatrix zero(int m);
    static SquareMatrix identity(int m);

    int dim() const { return m_; }
    double operator()(int i, int k) const { return e_[static_cast<std::size_t>(i) * m_ + k]; }
    double at(int i, int k) const;
    const std::vector<double>& entries() const { return e_; }

private:
    int m_;
    std::vector<double> e_;
};

/// Dense m x m x m array of finite reals, 0-based indices (i,j,k).
/// Flat layout: offset = i*m^2 + j*m + k.
class CubicMatrix {
public:
    CubicMatrix(int m, std::vector<double> entries);

    static CubicMatrix zero(int m);

    int dim() const { return m_; }
    double operator()(int i, int j, int k) const {
        return e_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k];
    }
    /// Bounds-checked access.
    double at(int i, int j, int k) const;
    const std::vector<double>& entries() const { return e_; }

private:
    int m_;
    std::vector<double> e_;
};

/// Basis matrix E_{ijk}: 1 at (i,j,k), 0 elsewhere.
CubicMatrix basis(int m, int i, int j, int k);

/// Slice at fixed second index j: (i,k) -> Q(i,j,k).
SquareMatrix slice_second(const CubicMatrix& q, int j);

/// Slice at fixed first index i: (j,k) -> Q(i,j,k).
SquareMatrix slice_first(const CubicMatrix& q, int i);

/// Sum over the middle index: (i,k) -> sum_j Q(i,j,k).
SquareMatrix contract_second(const CubicMatrix& q);

/// Reassemble a cubic matrix from its m second-index slices.
CubicMatrix stack_second(const std::vector<SquareMatrix>& slices);

/// Standard row-by-column product.
SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);

SquareMatrix add(const SquareMatrix& a, const SquareMatrix& b);
CubicMatrix add(const CubicMatrix& a, const CubicMatrix& b);
CubicMatrix scale(const CubicMatrix& a, double factor);

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b);
double max_abs_diff(const CubicMatrix& a, const CubicMatrix& b);

double determinant(const SquareMatrix& a);

/// Inverse via closed form for m=2, Gaussian elimination with partial
/// pivoting otherwise. Throws ConstructionError when |det| <= det_floor.
SquareMatrix inverse(const SquareMatrix& a, double det_floor = 1e-10);

/// Copy with entries in [-tol, 0) clamped to 0. Entries below -tol are an
/// error; clamping never happens silently inside other operations.
CubicMatrix clamped_nonnegative(const CubicMatrix& q, double tol = 1e-12);

}  // namespace qsp
