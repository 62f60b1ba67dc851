#ifndef INTWIST_RECONSTRUCT_HPP
#define INTWIST_RECONSTRUCT_HPP

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace intwist {

// Univariate rational function with exact rational coefficients, used to
// recover a function of one parameter from samples at rational points.
struct RatInterp {
    std::vector<Rat> num;  // ascending powers
    std::vector<Rat> den;

    Rat eval(const Rat& t) const {
        Rat n(0), d(0), p(1);
        for (const auto& c : num) {
            n += c * p;
            p *= t;
        }
        p = Rat(1);
        for (const auto& c : den) {
            d += c * p;
            p *= t;
        }
        if (d == 0) throw Error("interpolant pole at evaluation point");
        return n / d;
    }
};

namespace detail {

// One nonzero kernel vector of an under-determined homogeneous system,
// found by fraction-free style Gaussian elimination over the rationals.
inline std::vector<Rat> kernel_vector(std::vector<std::vector<Rat>> m,
                                      std::size_t cols) {
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        Rat inv = Rat(1) / m[row][col];
        for (std::size_t c = col; c < cols; ++c) m[row][c] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        pivot_col.push_back(col);
        ++row;
    }
    // pick the first free column and back-substitute
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::size_t free_col = cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) {
            free_col = c;
            break;
        }
    if (free_col == cols) return {};  // trivial kernel only
    std::vector<Rat> v(cols, Rat(0));
    v[free_col] = Rat(1);
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        v[pivot_col[r]] = -m[r][free_col];
    return v;
}

}  // namespace detail

// Recover f = num/den with deg num <= dn, deg den <= dd from samples
// (ts[k], fs[k]); the first dn+dd+1 samples pin the candidate and every
// remaining sample must agree exactly. Returns false on mismatch.
inline bool rat_reconstruct_fixed(const std::vector<Rat>& ts,
                                  const std::vector<Rat>& fs, std::size_t dn,
                                  std::size_t dd, RatInterp& out) {
    std::size_t unknowns = dn + dd + 2;
    std::size_t need = unknowns - 1;
    if (ts.size() < need + 1) return false;  // at least one check sample
    std::vector<std::vector<Rat>> m(need, std::vector<Rat>(unknowns, Rat(0)));
    for (std::size_t k = 0; k < need; ++k) {
        Rat p(1);
        for (std::size_t j = 0; j <= dn; ++j) {
            m[k][j] = p;
            p *= ts[k];
        }
        p = Rat(1);
        for (std::size_t j = 0; j <= dd; ++j) {
            m[k][dn + 1 + j] = -fs[k] * p;
            p *= ts[k];
        }
    }
    std::vector<Rat> v = detail::kernel_vector(std::move(m), unknowns);
    if (v.empty()) return false;
    RatInterp cand;
    cand.num.assign(v.begin(), v.begin() + static_cast<long>(dn + 1));
    cand.den.assign(v.begin() + static_cast<long>(dn + 1), v.end());
    bool den_zero = true;
    for (const auto& c : cand.den)
        if (c != 0) den_zero = false;
    if (den_zero) return false;
    for (std::size_t k = need; k < ts.size(); ++k) {
        try {
            if (cand.eval(ts[k]) != fs[k]) return false;
        } catch (const Error&) {
            return false;
        }
    }
    out = std::move(cand);
    return true;
}

// Adaptive variant: grow the balanced degree until the candidate passes all
// spare samples. Needs 2*d+2+spares samples to certify degree d.
inline RatInterp rat_reconstruct(const std::vector<Rat>& ts,
                                 const std::vector<Rat>& fs,
                                 std::size_t min_spare = 3) {
    if (ts.size() != fs.size() || ts.empty())
        throw Error("bad sample vectors for reconstruction");
    for (std::size_t d = 0;; ++d) {
        if (2 * d + 1 + min_spare + 1 > ts.size())
            throw Error("not enough samples to certify the interpolant");
        RatInterp out;
        if (rat_reconstruct_fixed(ts, fs, d, d, out)) return out;
        // also try the unbalanced neighbours at the same total degree
        if (d > 0 && rat_reconstruct_fixed(ts, fs, d - 1, d, out)) return out;
        if (d > 0 && rat_reconstruct_fixed(ts, fs, d, d - 1, out)) return out;
    }
}

}  // namespace intwist

#endif
