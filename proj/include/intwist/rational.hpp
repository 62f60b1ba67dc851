#ifndef INTWIST_RATIONAL_HPP
#define INTWIST_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace intwist {

// Exact arbitrary-precision rational. mpq_class keeps values canonical
// (reduced, positive denominator) after every arithmetic operation.
using Rat = mpq_class;

inline std::string rat_to_string(const Rat& r) {
    return r.get_str();
}

inline bool rat_is_integer(const Rat& r) {
    return r.get_den() == 1;
}

// gcd of two rationals as used for polynomial content:
// gcd(a/b, c/d) = gcd(a,c)/lcm(b,d), always non-negative.
inline Rat rat_content_gcd(const Rat& a, const Rat& b) {
    mpz_class gn, ld;
    mpz_gcd(gn.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
    mpz_lcm(ld.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    Rat g(gn, ld);
    g.canonicalize();
    return g;
}

}  // namespace intwist

#endif
