#include "qsp/cubic_matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qsp/exceptions.hpp"

namespace qsp {

namespace {

void check_dim(int m) {
    if (m < kMinDim || m > kMaxDim) {
        throw std::invalid_argument("dimension m=" + std::to_string(m) + " outside supported range [" +
                                    std::to_string(kMinDim) + "," + std::to_string(kMaxDim) + "]");
    }
}

void check_finite(const std::vector<double>& e, const char* what) {
    for (double v : e) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

}  // namespace

SquareMatrix::SquareMatrix(int m, std::vector<double> entries) : m_(m), e_(std::move(entries)) {
    check_dim(m);
    if (e_.size() != static_cast<std::size_t>(m) * m) {
        throw std::invalid_argument("SquareMatrix: expected " + std::to_string(m * m) + " entries, got " +
                                    std::to_string(e_.size()));
    }
    check_finite(e_, "SquareMatrix");
}

SquareMatrix SquareMatrix::zero(int m) {
    check_dim(m);
    return SquareMatrix(m, std::vector<double>(static_cast<std::size_t>(m) * m, 0.0));
}

SquareMatrix SquareMatrix::identity(int m) {
    check_dim(m);
    std::vector<double> e(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) e[static_cast<std::size_t>(i) * m + i] = 1.0;
    return SquareMatrix(m, std::move(e));
}

double SquareMatrix::at(int i, int k) const {
    if (i < 0 || i >= m_ || k < 0 || k >= m_) {
        throw std::out_of_range("SquareMatrix::at(" + std::to_string(i) + "," + std::to_string(k) +
                                ") with m=" + std::to_string(m_));
    }
    return (*this)(i, k);
}

CubicMatrix::CubicMatrix(int m, std::vector<double> entries) : m_(m), e_(std::move(entries)) {
    check_dim(m);
    const std::size_t want = static_cast<std::size_t>(m) * m * m;
    if (e_.size() != want) {
        throw std::invalid_argument("CubicMatrix: expected " + std::to_string(want) + " entries, got " +
                                    std::to_string(e_.size()));
    }
    check_finite(e_, "CubicMatrix");
}

CubicMatrix CubicMatrix::zero(int m) {
    check_dim(m);
    return CubicMatrix(m, std::vector<double>(static_cast<std::size_t>(m) * m * m, 0.0));
}

double CubicMatrix::at(int i, int j, int k) const {
    if (i < 0 || i >= m_ || j < 0 || j >= m_ || k < 0 || k >= m_) {
        throw std::out_of_range("CubicMatrix::at(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ") with m=" + std::to_string(m_));
    }
    return (*this)(i, j, k);
}

CubicMatrix basis(int m, int i, int j, int k) {
    check_dim(m);
    if (i < 0 || i >= m || j < 0 || j >= m || k < 0 || k >= m) {
        throw std::out_of_range("basis(" + std::to_string(m) + "): index (" + std::to_string(i) + "," +
                                std::to_string(j) + "," + std::to_string(k) + ") out of range");
    }
    std::vector<double> e(static_cast<std::size_t>(m) * m * m, 0.0);
    e[(static_cast<std::size_t>(i) * m + j) * m + k] = 1.0;
    return CubicMatrix(m, std::move(e));
}

SquareMatrix slice_second(const CubicMatrix& q, int j) {
    const int m = q.dim();
    if (j < 0 || j >= m) throw std::out_of_range("slice_second: j=" + std::to_string(j));
    std::vector<double> e(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) e[static_cast<std::size_t>(i) * m + k] = q(i, j, k);
    return SquareMatrix(m, std::move(e));
}

SquareMatrix slice_first(const CubicMatrix& q, int i) {
    const int m = q.dim();
    if (i < 0 || i >= m) throw std::out_of_range("slice_first: i=" + std::to_string(i));
    std::vector<double> e(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) e[static_cast<std::size_t>(j) * m + k] = q(i, j, k);
    return SquareMatrix(m, std::move(e));
}

SquareMatrix contract_second(const CubicMatrix& q) {
    const int m = q.dim();
    std::vector<double> e(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            double sum = 0.0;
            for (int j = 0; j < m; ++j) sum += q(i, j, k);
            e[static_cast<std::size_t>(i) * m + k] = sum;
        }
    return SquareMatrix(m, std::move(e));
}

CubicMatrix stack_second(const std::vector<SquareMatrix>& slices) {
    if (slices.empty()) throw std::invalid_argument("stack_second: no slices");
    const int m = slices[0].dim();
    if (static_cast<int>(slices.size()) != m) {
        throw std::invalid_argument("stack_second: need exactly m=" + std::to_string(m) + " slices, got " +
                                    std::to_string(slices.size()));
    }
    std::vector<double> e(static_cast<std::size_t>(m) * m * m);
    for (int j = 0; j < m; ++j) {
        if (slices[j].dim() != m) throw std::invalid_argument("stack_second: slice dimension mismatch");
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) e[(static_cast<std::size_t>(i) * m + j) * m + k] = slices[j](i, k);
    }
    return CubicMatrix(m, std::move(e));
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
    const int m = a.dim();
    if (b.dim() != m) throw std::invalid_argument("multiply: dimension mismatch");
    std::vector<double> e(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < m; ++r) {
            double sum = 0.0;
            for (int k = 0; k < m; ++k) sum += a(i, k) * b(k, r);
            e[static_cast<std::size_t>(i) * m + r] = sum;
        }
    return SquareMatrix(m, std::move(e));
}

SquareMatrix add(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("add: dimension mismatch");
    std::vector<double> e(a.entries());
    for (std::size_t p = 0; p < e.size(); ++p) e[p] += b.entries()[p];
    return SquareMatrix(a.dim(), std::move(e));
}

CubicMatrix add(const CubicMatrix& a, const CubicMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("add: dimension mismatch");
    std::vector<double> e(a.entries());
    for (std::size_t p = 0; p < e.size(); ++p) e[p] += b.entries()[p];
    return CubicMatrix(a.dim(), std::move(e));
}

CubicMatrix scale(const CubicMatrix& a, double factor) {
    std::vector<double> e(a.entries());
    for (double& v : e) v *= factor;
    return CubicMatrix(a.dim(), std::move(e));
}

double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t p = 0; p < a.entries().size(); ++p) {
        const double d = std::abs(a.entries()[p] - b.entries()[p]);
        if (d > worst) worst = d;
    }
    return worst;
}

double max_abs_diff(const CubicMatrix& a, const CubicMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t p = 0; p < a.entries().size(); ++p) {
        const double d = std::abs(a.entries()[p] - b.entries()[p]);
        if (d > worst) worst = d;
    }
    return worst;
}

namespace {

// LU with partial pivoting; returns false when a pivot falls below the floor.
bool lu_decompose(std::vector<double>& a, std::vector<int>& perm, int m, double floor, int& sign) {
    sign = 1;
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * m + col]);
        for (int r = col + 1; r < m; ++r) {
            const double v = std::abs(a[static_cast<std::size_t>(r) * m + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best <= floor) return false;
        if (pivot != col) {
            for (int c = 0; c < m; ++c)
                std::swap(a[static_cast<std::size_t>(pivot) * m + c], a[static_cast<std::size_t>(col) * m + c]);
            std::swap(perm[pivot], perm[col]);
            sign = -sign;
        }
        const double d = a[static_cast<std::size_t>(col) * m + col];
        for (int r = col + 1; r < m; ++r) {
            const double f = a[static_cast<std::size_t>(r) * m + col] / d;
            a[static_cast<std::size_t>(r) * m + col] = f;
            for (int c = col + 1; c < m; ++c)
                a[static_cast<std::size_t>(r) * m + c] -= f * a[static_cast<std::size_t>(col) * m + c];
        }
    }
    return true;
}

}  // namespace

double determinant(const SquareMatrix& a) {
    const int m = a.dim();
    if (m == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    std::vector<double> lu(a.entries());
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    int sign = 1;
    if (!lu_decompose(lu, perm, m, 0.0, sign)) return 0.0;
    double det = sign;
    for (int i = 0; i < m; ++i) det *= lu[static_cast<std::size_t>(i) * m + i];
    return det;
}

SquareMatrix inverse(const SquareMatrix& a, double det_floor) {
    const int m = a.dim();
    if (m == 2) {
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        if (std::abs(det) <= det_floor) {
            throw ConstructionError("inverse: |det|=" + std::to_string(std::abs(det)) + " below floor " +
                                    std::to_string(det_floor));
        }
        return SquareMatrix(2, {a(1, 1) / det, -a(0, 1) / det, -a(1, 0) / det, a(0, 0) / det});
    }
    std::vector<double> lu(a.entries());
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    int sign = 1;
    if (!lu_decompose(lu, perm, m, det_floor, sign)) {
        throw ConstructionError("inverse: pivot below floor " + std::to_string(det_floor) +
                                ", matrix treated as singular");
    }
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> col(m);
    for (int e = 0; e < m; ++e) {
        for (int r = 0; r < m; ++r) col[r] = (perm[r] == e) ? 1.0 : 0.0;
        for (int r = 1; r < m; ++r)
            for (int c = 0; c < r; ++c) col[r] -= lu[static_cast<std::size_t>(r) * m + c] * col[c];
        for (int r = m - 1; r >= 0; --r) {
            for (int c = r + 1; c < m; ++c) col[r] -= lu[static_cast<std::size_t>(r) * m + c] * col[c];
            col[r] /= lu[static_cast<std::size_t>(r) * m + r];
        }
        for (int r = 0; r < m; ++r) inv[static_cast<std::size_t>(r) * m + e] = col[r];
    }
    return SquareMatrix(m, std::move(inv));
}

CubicMatrix clamped_nonnegative(const CubicMatrix& q, double tol) {
    std::vector<double> e(q.entries());
    for (double& v : e) {
        if (v < -tol) {
            throw std::invalid_argument("clamped_nonnegative: entry " + std::to_string(v) +
                                        " below -tol=" + std::to_string(-tol));
        }
        if (v < 0.0) v = 0.0;
    }
    return CubicMatrix(q.dim(), std::move(e));
}

}  // namespace qsp
