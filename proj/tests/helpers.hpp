#pragma once

#include <random>
#include <vector>

#include "qsp/cubic_matrix.hpp"
#include "qsp/products.hpp"

namespace qsp::test {

inline std::mt19937_64 rng(std::uint64_t seed = 0x5eed) { return std::mt19937_64(seed); }

inline CubicMatrix rand_cubic(int m, std::mt19937_64& gen, double lo = 0.0, double hi = 1.5) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> e(static_cast<std::size_t>(m) * m * m);
    for (double& v : e) v = dist(gen);
    return CubicMatrix(m, std::move(e));
}

/// Entries nonnegative with sum over k equal to 1 for every (i,j).
inline CubicMatrix rand_3_stochastic(int m, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    std::vector<double> e(static_cast<std::size_t>(m) * m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double sum = 0.0;
            for (int k = 0; k < m; ++k) {
                const double v = dist(gen);
                e[(static_cast<std::size_t>(i) * m + j) * m + k] = v;
                sum += v;
            }
            for (int k = 0; k < m; ++k) e[(static_cast<std::size_t>(i) * m + j) * m + k] /= sum;
        }
    return CubicMatrix(m, std::move(e));
}

/// Entries nonnegative with sum over (i,j) equal to 1 for every k.
inline CubicMatrix rand_12_stochastic(int m, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    std::vector<double> e(static_cast<std::size_t>(m) * m * m);
    for (int k = 0; k < m; ++k) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double v = dist(gen);
                e[(static_cast<std::size_t>(i) * m + j) * m + k] = v;
                sum += v;
            }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) e[(static_cast<std::size_t>(i) * m + j) * m + k] /= sum;
    }
    return CubicMatrix(m, std::move(e));
}

inline std::vector<double> rand_simplex(int m, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    std::vector<double> x(m);
    double sum = 0.0;
    for (double& v : x) {
        v = dist(gen);
        sum += v;
    }
    for (double& v : x) v /= sum;
    return x;
}

/// Independent oracle for the projection product: the specialized double sum
/// c_ijr = sum_{k,n} a_ijk b_knr, written without the table machinery.
inline CubicMatrix oracle_mul_projection(const CubicMatrix& a, const CubicMatrix& b) {
    const int m = a.dim();
    std::vector<double> c(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int r = 0; r < m; ++r) {
                double sum = 0.0;
                for (int k = 0; k < m; ++k)
                    for (int n = 0; n < m; ++n) sum += a(i, j, k) * b(k, n, r);
                c[(static_cast<std::size_t>(i) * m + j) * m + r] = sum;
            }
    return CubicMatrix(m, std::move(c));
}

/// Brute-force quadruple loop over (l,n,k) with the table filter, run per
/// output slot; deliberately structured differently from the library product.
inline CubicMatrix oracle_mul_table(const CubicMatrix& a, const CubicMatrix& b, const BinaryOpTable& op) {
    const int m = a.dim();
    std::vector<double> c(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int r = 0; r < m; ++r) {
                double sum = 0.0;
                for (int l = 0; l < m; ++l)
                    for (int n = 0; n < m; ++n) {
                        if (op(l, n) != j) continue;
                        for (int k = 0; k < m; ++k) sum += a(i, l, k) * b(k, n, r);
                    }
                c[(static_cast<std::size_t>(i) * m + j) * m + r] = sum;
            }
    return CubicMatrix(m, std::move(c));
}

}  // namespace qsp::test
