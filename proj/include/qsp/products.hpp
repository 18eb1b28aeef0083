#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "qsp/cubic_matrix.hpp"

namespace qsp {

/// Associative binary operation a : I x I -> I on the index set {0..m-1}.
/// Associativity a(a(x,y),z) == a(x,a(y,z)) is checked exhaustively at
/// construction; a non-associative table never becomes a value of this type.
class BinaryOpTable {
public:
    BinaryOpTable(int m, std::vector<int> table);

    /// a0(x,y) = x, the left projection.
    static BinaryOpTable left_projection(int m);

    int dim() const { return m_; }
    int operator()(int x, int y) const { return t_[static_cast<std::size_t>(x) * m_ + y]; }

private:
    int m_;
    std::vector<int> t_;
};

/// Sparse table of structural constants C^{uvw}_{ijk,lnr}; absent entries are
/// zero. Keys pack nine indices (three per slot, each < 8).
class StructConstants {
public:
    struct Term {
        int i, j, k;  // left factor index
        int l, n, r;  // right factor index
        int u, v, w;  // result index
        double coeff;
    };

    explicit StructConstants(int m);
    StructConstants(int m, const std::vector<Term>& terms);

    /// Constants realizing the delta-rule product E_ijk * E_lnr = [k==l][j==n] E_ijr.
    static StructConstants maksimov0(int m);
    /// Constants realizing E_ijk * E_lnr = [k==l] E_{i,a(j,n),r}.
    static StructConstants maksimov_a(const BinaryOpTable& op);

    int dim() const { return m_; }
    void add(const Term& term);
    double coeff(int i, int j, int k, int l, int n, int r, int u, int v, int w) const;
    const std::vector<Term>& terms() const { return terms_; }

private:
    int m_;
    std::vector<Term> terms_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// c_ijr = sum_k a_ijk * b_kjr.
CubicMatrix mul_maksimov0(const CubicMatrix& a, const CubicMatrix& b);

/// c_ijr = sum_{l,n : op(l,n)=j} sum_k a_ilk * b_knr.
CubicMatrix mul_maksimov_a(const CubicMatrix& a, const CubicMatrix& b, const BinaryOpTable& op);

/// Bilinear product from structural constants:
/// c_uvw = sum over stored terms of a_ijk * b_lnr * C^{uvw}_{ijk,lnr}.
CubicMatrix mul_general(const CubicMatrix& a, const CubicMatrix& b, const StructConstants& mu);

}  // namespace qsp
