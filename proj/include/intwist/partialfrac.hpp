#ifndef INTWIST_PARTIALFRAC_HPP
#define INTWIST_PARTIALFRAC_HPP

#include <utility>
#include <vector>

#include "unipoly.hpp"

namespace intwist {

// Univariate view of a rational function: num/den as polynomials in one
// designated variable over the field of the remaining names. The pair is
// coprime whenever the source RatFunc was in normal form (a common factor
// in the view would lift to a multivariate common factor).
struct UniView {
    UniPoly num;
    UniPoly den;

    RatFunc to_ratfunc() const { return num.to_ratfunc() / den.to_ratfunc(); }
};

inline UniView uni_view(const RatFunc& f, int var) {
    return {UniPoly::from_poly(f.num(), var), UniPoly::from_poly(f.den(), var)};
}

// Pole structure of a rational function in one variable: the squarefree
// factors of the denominator with multiplicities, plus the degrees needed
// to read off behaviour at infinity.
struct PoleData {
    std::vector<std::pair<UniPoly, int>> finite;  // (monic squarefree q, order)
    int num_deg;  // -1 for the zero function
    int den_deg;
};

inline PoleData pole_data(const RatFunc& f, int var) {
    UniView v = uni_view(f, var);
    return {squarefree_factor(v.den), v.num.deg(), v.den.deg()};
}

// Pole order of the one-form f*dvar at var = infinity (w = 1/var chart):
// positive means a pole, <= 1 is at most simple.
inline int infinity_form_order(const PoleData& p) {
    if (p.num_deg < 0) return 0;  // the zero form is regular everywhere
    return p.num_deg - p.den_deg + 2;
}

// One-form simple-pole test: every finite pole of order <= 1 and at most a
// simple pole at infinity.
inline bool is_simple_form(const RatFunc& f, int var) {
    PoleData p = pole_data(f, var);
    if (infinity_form_order(p) > 1) return false;
    for (const auto& [q, m] : p.finite)
        if (m > 1) return false;
    return true;
}

// Partial fraction decomposition with respect to the squarefree
// factorization of the denominator:
//   f = poly_part + sum_{q} sum_{k=1..ord(q)} num_{q,k} / q^k,
// deg num_{q,k} < deg q for every term. Terms with zero numerator are kept
// so callers can address slots positionally.
struct PartialFractions {
    struct Term {
        UniPoly q;    // monic squarefree factor
        int k;        // power of q in the denominator
        UniPoly num;  // deg < deg q
    };
    UniPoly poly_part;
    std::vector<Term> terms;
};

inline PartialFractions partial_fractions(const RatFunc& f, int var) {
    UniView v = uni_view(f, var);
    const RegistryPtr& reg = f.registry();
    auto [poly_part, rem] = divmod(v.num, v.den);
    PartialFractions out{std::move(poly_part), {}};

    auto factors = squarefree_factor(v.den);
    // Denominator scale: den = lead * prod q^m; fold the lead into rem.
    if (!v.den.is_zero()) rem = rem * v.den.lead().inverse();

    // Split rem / prod q_i^{m_i} into single-factor pieces with Bezout.
    struct Piece {
        UniPoly q;
        int m;
        UniPoly num;
    };
    std::vector<Piece> pieces;
    UniPoly r = std::move(rem);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        UniPoly qm = factors[i].first;
        for (int k = 1; k < factors[i].second; ++k) qm *= factors[i].first;
        if (i + 1 == factors.size()) {
            pieces.push_back({factors[i].first, factors[i].second,
                              divmod(r, qm).second});
            break;
        }
        UniPoly rest = UniPoly::constant(reg, v.num.var(), RatFunc::constant(reg, 1));
        for (std::size_t j = i + 1; j < factors.size(); ++j) {
            UniPoly fj = factors[j].first;
            for (int k = 1; k < factors[j].second; ++k) fj *= factors[j].first;
            rest *= fj;
        }
        // s*qm + t*rest = 1, so r/(qm*rest) = r*t/qm + r*s/rest.
        auto eg = extended_euclid(qm, rest);
        if (eg.g.deg() != 0)
            throw Error("partial fractions: factors not coprime");
        pieces.push_back({factors[i].first, factors[i].second,
                          divmod(r * eg.t, qm).second});
        r = divmod(r * eg.s, rest).second;
    }

    // q-adic expansion of each piece: num/q^m = sum_k c_k / q^k.
    for (auto& p : pieces) {
        std::vector<UniPoly> digits;  // ascending powers of q
        UniPoly n = std::move(p.num);
        for (int k = 0; k < p.m; ++k) {
            auto [quo, dig] = divmod(n, p.q);
            digits.push_back(std::move(dig));
            n = std::move(quo);
        }
        if (!n.is_zero()) throw Error("partial fractions: numerator too large");
        // num = sum_j d_j q^j, so num/q^m = sum_k d_{m-k} / q^k.
        for (int k = 1; k <= p.m; ++k)
            out.terms.push_back({p.q, k, digits[static_cast<std::size_t>(p.m - k)]});
    }
    return out;
}

}  // namespace intwist

#endif
