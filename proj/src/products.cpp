#include "qsp/products.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsp {

namespace {

void check_dims(int m) {
    if (m < kMinDim || m > kMaxDim) {
        throw std::invalid_argument("dimension m=" + std::to_string(m) + " outside supported range");
    }
}

std::uint64_t pack9(int i, int j, int k, int l, int n, int r, int u, int v, int w) {
    const int idx[9] = {i, j, k, l, n, r, u, v, w};
    std::uint64_t key = 0;
    for (int q = 0; q < 9; ++q) key = (key << 3) | static_cast<std::uint64_t>(idx[q]);
    return key;
}

}  // namespace

BinaryOpTable::BinaryOpTable(int m, std::vector<int> table) : m_(m), t_(std::move(table)) {
    check_dims(m);
    if (t_.size() != static_cast<std::size_t>(m) * m) {
        throw std::invalid_argument("BinaryOpTable: expected " + std::to_string(m * m) + " values");
    }
    for (int v : t_) {
        if (v < 0 || v >= m) throw std::invalid_argument("BinaryOpTable: value out of range");
    }
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            for (int z = 0; z < m; ++z) {
                if ((*this)((*this)(x, y), z) != (*this)(x, (*this)(y, z))) {
                    throw std::invalid_argument("BinaryOpTable: not associative at (" + std::to_string(x) +
                                                "," + std::to_string(y) + "," + std::to_string(z) + ")");
                }
            }
}

BinaryOpTable BinaryOpTable::left_projection(int m) {
    check_dims(m);
    std::vector<int> t(static_cast<std::size_t>(m) * m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) t[static_cast<std::size_t>(x) * m + y] = x;
    return BinaryOpTable(m, std::move(t));
}

StructConstants::StructConstants(int m) : m_(m) { check_dims(m); }

StructConstants::StructConstants(int m, const std::vector<Term>& terms) : m_(m) {
    check_dims(m);
    for (const Term& t : terms) add(t);
}

void StructConstants::add(const Term& term) {
    const int idx[9] = {term.i, term.j, term.k, term.l, term.n, term.r, term.u, term.v, term.w};
    for (int q = 0; q < 9; ++q) {
        if (idx[q] < 0 || idx[q] >= m_) throw std::out_of_range("StructConstants::add: index out of range");
    }
    if (!std::isfinite(term.coeff)) throw std::invalid_argument("StructConstants::add: non-finite coefficient");
    const std::uint64_t key = pack9(term.i, term.j, term.k, term.l, term.n, term.r, term.u, term.v, term.w);
    auto it = index_.find(key);
    if (it == index_.end()) {
        index_.emplace(key, terms_.size());
        terms_.push_back(term);
    } else {
        terms_[it->second].coeff = term.coeff;
    }
}

double StructConstants::coeff(int i, int j, int k, int l, int n, int r, int u, int v, int w) const {
    auto it = index_.find(pack9(i, j, k, l, n, r, u, v, w));
    return it == index_.end() ? 0.0 : terms_[it->second].coeff;
}

StructConstants StructConstants::maksimov0(int m) {
    StructConstants mu(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int r = 0; r < m; ++r) mu.add({i, j, k, k, j, r, i, j, r, 1.0});
    return mu;
}

StructConstants StructConstants::maksimov_a(const BinaryOpTable& op) {
    const int m = op.dim();
    StructConstants mu(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int n = 0; n < m; ++n)
                    for (int r = 0; r < m; ++r) mu.add({i, j, k, k, n, r, i, op(j, n), r, 1.0});
    return mu;
}

CubicMatrix mul_maksimov0(const CubicMatrix& a, const CubicMatrix& b) {
    const int m = a.dim();
    if (b.dim() != m) throw std::invalid_argument("mul_maksimov0: dimension mismatch");
    std::vector<double> c(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int r = 0; r < m; ++r) {
                double sum = 0.0;
                for (int k = 0; k < m; ++k) sum += a(i, j, k) * b(k, j, r);
                c[(static_cast<std::size_t>(i) * m + j) * m + r] = sum;
            }
    return CubicMatrix(m, std::move(c));
}

CubicMatrix mul_maksimov_a(const CubicMatrix& a, const CubicMatrix& b, const BinaryOpTable& op) {
    const int m = a.dim();
    if (b.dim() != m || op.dim() != m) throw std::invalid_argument("mul_maksimov_a: dimension mismatch");
    std::vector<double> c(static_cast<std::size_t>(m) * m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l)
            for (int n = 0; n < m; ++n) {
                const int j = op(l, n);
                for (int r = 0; r < m; ++r) {
                    double sum = 0.0;
                    for (int k = 0; k < m; ++k) sum += a(i, l, k) * b(k, n, r);
                    c[(static_cast<std::size_t>(i) * m + j) * m + r] += sum;
                }
            }
    return CubicMatrix(m, std::move(c));
}

CubicMatrix mul_general(const CubicMatrix& a, const CubicMatrix& b, const StructConstants& mu) {
    const int m = a.dim();
    if (b.dim() != m || mu.dim() != m) throw std::invalid_argument("mul_general: dimension mismatch");
    std::vector<double> c(static_cast<std::size_t>(m) * m * m, 0.0);
    for (const StructConstants::Term& t : mu.terms()) {
        c[(static_cast<std::size_t>(t.u) * m + t.v) * m + t.w] += a(t.i, t.j, t.k) * b(t.l, t.n, t.r) * t.coeff;
    }
    return CubicMatrix(m, std::move(c));
}

}  // namespace qsp
