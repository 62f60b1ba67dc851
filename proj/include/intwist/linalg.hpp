#ifndef INTWIST_LINALG_HPP
#define INTWIST_LINALG_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "ratfunc.hpp"

namespace intwist {

using MatRF = std::vector<std::vector<RatFunc>>;
using VecRF = std::vector<RatFunc>;

inline MatRF identity_matrix(const RegistryPtr& reg, std::size_t n) {
    MatRF m(n, VecRF(n, RatFunc(reg)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = RatFunc::constant(reg, 1);
    return m;
}

inline MatRF mat_mul(const MatRF& a, const MatRF& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    const RegistryPtr& reg = a[0][0].registry();
    MatRF r(n, VecRF(m, RatFunc(reg)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline MatRF mat_add(const MatRF& a, const MatRF& b) {
    MatRF r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
    return r;
}

inline MatRF mat_transpose(const MatRF& a) {
    std::size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    MatRF r(m, VecRF(n, RatFunc(a[0][0].registry())));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

inline MatRF mat_neg(const MatRF& a) {
    MatRF r = a;
    for (auto& row : r)
        for (auto& e : row) e = -e;
    return r;
}

namespace detail {

// Fraction-free forward elimination (Bareiss) on the augmented system
// [A | B] after clearing each row to polynomial entries. Returns the
// triangularized polynomial matrix, the permutation sign, and the product
// of the row scale factors that were multiplied in.
struct BareissResult {
    explicit BareissResult(const RegistryPtr& reg)
        : row_scale_product(MultiPoly::constant(reg, 1)) {}
    std::vector<std::vector<MultiPoly>> m;
    int sign = 1;
    MultiPoly row_scale_product;
    bool singular = false;  // some pivot column was entirely zero
};

inline BareissResult bareiss_eliminate(const MatRF& A, const MatRF& B) {
    std::size_t n = A.size();
    std::size_t m = B.empty() ? 0 : B[0].size();
    const RegistryPtr& reg = A[0][0].registry();

    BareissResult res(reg);
    res.m.assign(n, std::vector<MultiPoly>(n + m, MultiPoly(reg)));
    for (std::size_t i = 0; i < n; ++i) {
        MultiPoly L = MultiPoly::constant(reg, 1);
        auto fold = [&](const RatFunc& e) { L = lcm_poly(L, e.den()); };
        for (std::size_t j = 0; j < n; ++j) fold(A[i][j]);
        for (std::size_t j = 0; j < m; ++j) fold(B[i][j]);
        for (std::size_t j = 0; j < n; ++j)
            res.m[i][j] = A[i][j].num() * L.divide_exact(A[i][j].den());
        for (std::size_t j = 0; j < m; ++j)
            res.m[i][n + j] = B[i][j].num() * L.divide_exact(B[i][j].den());
        res.row_scale_product *= L;
    }

    auto& M = res.m;
    MultiPoly prev = MultiPoly::constant(reg, 1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && M[piv][k].is_zero()) ++piv;
        if (piv == n) {
            res.singular = true;
            return res;
        }
        if (piv != k) {
            std::swap(M[piv], M[k]);
            res.sign = -res.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n + m; ++j)
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).divide_exact(prev);
            M[i][k] = MultiPoly(reg);
        }
        prev = M[k][k];
    }
    return res;
}

}  // namespace detail

// Determinant via Bareiss; exact over the rational function field.
inline RatFunc det_exact(const MatRF& A) {
    std::size_t n = A.size();
    const RegistryPtr& reg = A[0][0].registry();
    if (n == 0) return RatFunc::constant(reg, 1);
    auto r = detail::bareiss_eliminate(A, {});
    if (r.singular) return RatFunc(reg);
    RatFunc d(r.m[n - 1][n - 1], r.row_scale_product);
    return r.sign < 0 ? -d : d;
}

// Solve A * X = B with a matrix right-hand side; throws SingularSystem.
inline MatRF solve_exact(const MatRF& A, const MatRF& B) {
    std::size_t n = A.size();
    std::size_t m = B.empty() ? 0 : B[0].size();
    const RegistryPtr& reg = A[0][0].registry();
    auto r = detail::bareiss_eliminate(A, B);
    if (r.singular) throw SingularSystem("exact linear solve: singular matrix");

    MatRF X(n, VecRF(m, RatFunc(reg)));
    for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t ii = n; ii-- > 0;) {
            RatFunc acc = RatFunc(r.m[ii][n + col]);
            for (std::size_t j = ii + 1; j < n; ++j)
                acc -= RatFunc(r.m[ii][j]) * X[j][col];
            X[ii][col] = acc / RatFunc(r.m[ii][ii]);
        }
    }
    return X;
}

inline VecRF solve_exact(const MatRF& A, const VecRF& b) {
    MatRF B(b.size(), VecRF(1, RatFunc(b[0].registry())));
    for (std::size_t i = 0; i < b.size(); ++i) B[i][0] = b[i];
    MatRF X = solve_exact(A, B);
    VecRF x;
    x.reserve(b.size());
    for (auto& row : X) x.push_back(std::move(row[0]));
    return x;
}

inline MatRF inverse_exact(const MatRF& A) {
    return solve_exact(A, identity_matrix(A[0][0].registry(), A.size()));
}

// Rank over the rational function field by Gaussian elimination.
inline std::size_t rank_exact(MatRF m) {
    std::size_t rank = 0, rows = m.size();
    if (rows == 0 || m[0].empty()) return 0;
    std::size_t cols = m[0].size();
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        RatFunc inv = m[rank][c].inverse();
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c].is_zero()) continue;
            RatFunc f = m[r][c] * inv;
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// Adjugate: adj(A) * A = det(A) * 1. Requires det(A) != 0 as a rational
// function, which holds for the connection matrices this library builds.
inline MatRF adjugate_exact(const MatRF& A) {
    RatFunc d = det_exact(A);
    if (d.is_zero()) throw SingularSystem("adjugate of singular matrix");
    MatRF inv = inverse_exact(A);
    for (auto& row : inv)
        for (auto& e : row) e *= d;
    return inv;
}

}  // namespace intwist

#endif
