#ifndef INTWIST_UNIPOLY_HPP
#define INTWIST_UNIPOLY_HPP

#include <utility>
#include <vector>

#include "expr.hpp"
#include "ratfunc.hpp"

namespace intwist {

// Univariate polynomial in one registry name, with coefficients in the field
// of rational functions of the remaining names. Coefficients are stored in
// ascending powers and trimmed (no trailing zeros); the zero polynomial has
// an empty coefficient vector.
class UniPoly {
public:
    UniPoly(RegistryPtr reg, int var) : reg_(std::move(reg)), var_(var) {}

    UniPoly(RegistryPtr reg, int var, std::vector<RatFunc> coeffs)
        : reg_(std::move(reg)), var_(var), c_(std::move(coeffs)) {
        trim();
    }

    // View a polynomial as univariate in `var`; remaining names become
    // coefficient-field elements.
    static UniPoly from_poly(const MultiPoly& p, int var) {
        UniPoly u(p.registry(), var);
        int d = p.degree_in(var);
        for (int k = 0; k <= d; ++k)
            u.c_.push_back(RatFunc(p.coeff_of_power(var, static_cast<unsigned>(k))));
        u.trim();
        return u;
    }

    // View a rational function whose denominator is free of `var` as a
    // univariate polynomial in `var`.
    static UniPoly from_ratfunc(const RatFunc& f, int var) {
        if (f.den().uses(var))
            throw Error("denominator depends on the polynomial variable");
        UniPoly u = from_poly(f.num(), var);
        RatFunc inv_den = RatFunc(f.den()).inverse();
        for (auto& c : u.c_) c *= inv_den;
        return u;
    }

    static UniPoly constant(RegistryPtr reg, int var, RatFunc c) {
        UniPoly u(std::move(reg), var);
        if (!c.is_zero()) u.c_.push_back(std::move(c));
        return u;
    }

    const RegistryPtr& registry() const { return reg_; }
    int var() const { return var_; }
    const std::vector<RatFunc>& coeffs() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    int deg() const { return static_cast<int>(c_.size()) - 1; }

    RatFunc coeff(int k) const {
        if (k < 0 || k > deg()) return RatFunc(reg_);
        return c_[static_cast<std::size_t>(k)];
    }
    const RatFunc& lead() const { return c_.back(); }

    bool operator==(const UniPoly& o) const { return var_ == o.var_ && c_ == o.c_; }
    bool operator!=(const UniPoly& o) const { return !(*this == o); }

    UniPoly operator-() const {
        UniPoly r(reg_, var_);
        for (const auto& c : c_) r.c_.push_back(-c);
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        a.check(b);
        UniPoly r(a.reg_, a.var_);
        std::size_t n = std::max(a.c_.size(), b.c_.size());
        for (std::size_t i = 0; i < n; ++i)
            r.c_.push_back(a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i)));
        r.trim();
        return r;
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        a.check(b);
        UniPoly r(a.reg_, a.var_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, RatFunc(a.reg_));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }

    UniPoly operator*(const RatFunc& s) const {
        UniPoly r(reg_, var_);
        if (s.is_zero()) return r;
        for (const auto& c : c_) r.c_.push_back(c * s);
        return r;
    }

    UniPoly& operator+=(const UniPoly& o) { return *this = *this + o; }
    UniPoly& operator-=(const UniPoly& o) { return *this = *this - o; }
    UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

    // Multiply by var^k.
    UniPoly shift(int k) const {
        UniPoly r(reg_, var_);
        if (is_zero()) return r;
        r.c_.assign(static_cast<std::size_t>(k), RatFunc(reg_));
        r.c_.insert(r.c_.end(), c_.begin(), c_.end());
        return r;
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return *this * lead().inverse();
    }

    UniPoly derivative() const {
        UniPoly r(reg_, var_);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.c_.push_back(c_[i] * Rat(static_cast<unsigned long>(i)));
        r.trim();
        return r;
    }

    RatFunc eval(const RatFunc& x) const {
        RatFunc r(reg_);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    // Recombine into a rational function of all names.
    RatFunc to_ratfunc() const {
        RatFunc x = RatFunc(MultiPoly::variable(reg_, reg_->name(static_cast<std::size_t>(var_))));
        return eval(x);
    }

    friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
        a.check(b);
        if (b.is_zero()) throw ZeroDenominator("univariate division by zero");
        UniPoly q(a.reg_, a.var_), r = a;
        RatFunc inv_lead = b.lead().inverse();
        while (!r.is_zero() && r.deg() >= b.deg()) {
            int k = r.deg() - b.deg();
            RatFunc c = r.lead() * inv_lead;
            UniPoly t = UniPoly::constant(a.reg_, a.var_, c).shift(k);
            q += t;
            r -= t * b;
        }
        return {q, r};
    }

private:
    void check(const UniPoly& o) const {
        check_same_registry(reg_, o.reg_);
        if (var_ != o.var_) throw Error("univariate operands in different variables");
    }
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    RegistryPtr reg_;
    int var_;
    std::vector<RatFunc> c_;
};

// Monic gcd by the Euclidean algorithm over the coefficient field.
inline UniPoly gcd_uni(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

// Extended Euclid: returns (g, s, t) with s*a + t*b = g and g monic
// (or zero when both inputs are zero).
struct ExtendedGcd {
    UniPoly g, s, t;
};

inline ExtendedGcd extended_euclid(const UniPoly& a, const UniPoly& b) {
    const RegistryPtr& reg = a.registry();
    int v = a.var();
    UniPoly r0 = a, r1 = b;
    UniPoly s0 = UniPoly::constant(reg, v, RatFunc::constant(reg, 1));
    UniPoly s1(reg, v);
    UniPoly t0(reg, v);
    UniPoly t1 = UniPoly::constant(reg, v, RatFunc::constant(reg, 1));
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        UniPoly s = s0 - q * s1;
        UniPoly t = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s);
        t0 = std::move(t1); t1 = std::move(t);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    RatFunc inv = r0.lead().inverse();
    return {r0 * inv, s0 * inv, t0 * inv};
}

// Yun's squarefree factorization: p = lead * prod f_i^i with the f_i monic,
// squarefree and pairwise coprime. Returned as (factor, multiplicity) pairs,
// skipping trivial factors.
inline std::vector<std::pair<UniPoly, int>> squarefree_factor(const UniPoly& p) {
    std::vector<std::pair<UniPoly, int>> out;
    if (p.is_zero() || p.deg() == 0) return out;
    UniPoly f = p.monic();
    UniPoly fp = f.derivative();
    UniPoly a = gcd_uni(f, fp);
    UniPoly b = divmod(f, a).first;
    UniPoly c = divmod(fp, a).first;
    UniPoly d = c - b.derivative();
    int i = 1;
    while (b.deg() > 0) {
        UniPoly g = gcd_uni(b, d);
        if (g.deg() > 0) out.emplace_back(g, i);
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

// Radical (product of distinct monic irreducible-power bases).
inline UniPoly squarefree_part(const UniPoly& p) {
    UniPoly r = UniPoly::constant(p.registry(), p.var(), RatFunc::constant(p.registry(), 1));
    for (const auto& [f, m] : squarefree_factor(p)) r *= f;
    return r;
}

}  // namespace intwist

#endif
