#ifndef INTWIST_RESIDUE_HPP
#define INTWIST_RESIDUE_HPP

#include <vector>

#include "partialfrac.hpp"
#include "unipoly.hpp"

namespace intwist {

// Inverse of q modulo p over the coefficient field: returns r with
// r*q = 1 (mod p), deg r < deg p. Throws NotCoprime when gcd(q, p) != 1.
inline UniPoly polynomial_inverse(const UniPoly& q, const UniPoly& p) {
    auto eg = extended_euclid(q, p);
    if (eg.g.deg() != 0)
        throw NotCoprime("polynomial not invertible modulo the ideal");
    return divmod(eg.s, p).second;
}

// Sum of the local residues of (f / p) dz over all zeros of p, where
// f = num/den is regular on the zero set of p (gcd(den, p) = 1). With
// h = num * den^{-1} mod p = sum_k a_k z^k, the sum equals
// a_{deg p - 1} / lead(p).
inline RatFunc global_residue(const RatFunc& f, const UniPoly& p) {
    const RegistryPtr& reg = f.registry();
    if (p.deg() < 1) throw Error("global residue needs a nonconstant modulus");
    UniView v = uni_view(f, p.var());
    UniPoly h = divmod(v.num * polynomial_inverse(v.den, p), p).second;
    return h.coeff(p.deg() - 1) / p.lead();
}

// Dual basis of the monomials {1, z, ..., z^{nu-1}} with respect to the
// residue pairing <a, b> = global_residue(a*b, p): with p = sum c_i z^i,
// w_j = sum_{k} c_{j+k+1} z^k satisfies <z^i, w_j> = delta_{ij}.
inline std::vector<UniPoly> bezoutian_dual(const UniPoly& p) {
    int nu = p.deg();
    std::vector<UniPoly> w;
    w.reserve(static_cast<std::size_t>(nu));
    for (int j = 0; j < nu; ++j) {
        std::vector<RatFunc> c;
        for (int k = 0; k + j + 1 <= nu; ++k) c.push_back(p.coeff(j + k + 1));
        w.emplace_back(p.registry(), p.var(), std::move(c));
    }
    return w;
}

}  // namespace intwist

#endif
