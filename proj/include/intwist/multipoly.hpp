#ifndef INTWIST_MULTIPOLY_HPP
#define INTWIST_MULTIPOLY_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "registry.hpp"

namespace intwist {

using ExpVec = std::vector<unsigned>;

inline unsigned total_degree(const ExpVec& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

// Graded-lexicographic order on full-registry exponent vectors.
struct GrlexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        unsigned ta = total_degree(a), tb = total_degree(b);
        if (ta != tb) return ta < tb;
        return a < b;  // lexicographic tie-break
    }
};

// Sparse exact-rational multivariate polynomial over a shared registry.
// Invariant: no zero coefficients stored; zero polynomial = empty map.
class MultiPoly {
public:
    using TermMap = std::map<ExpVec, Rat, GrlexLess>;

    explicit MultiPoly(RegistryPtr reg) : reg_(std::move(reg)) {}

    static MultiPoly constant(RegistryPtr reg, const Rat& c) {
        MultiPoly p(std::move(reg));
        if (c != 0) p.terms_[ExpVec(p.reg_->size(), 0)] = c;
        return p;
    }

    static MultiPoly variable(RegistryPtr reg, const std::string& name) {
        MultiPoly p(reg);
        ExpVec e(reg->size(), 0);
        e[static_cast<std::size_t>(reg->require(name))] = 1;
        p.terms_[e] = 1;
        return p;
    }

    static MultiPoly monomial(RegistryPtr reg, ExpVec e, const Rat& c) {
        MultiPoly p(std::move(reg));
        if (c != 0) p.terms_[std::move(e)] = c;
        return p;
    }

    const RegistryPtr& registry() const { return reg_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        return terms_.begin()->second;
    }

    // Leading term under grlex.
    const std::pair<const ExpVec, Rat>& leading() const { return *terms_.rbegin(); }
    Rat leading_coeff() const { return is_zero() ? Rat(0) : terms_.rbegin()->second; }

    bool operator==(const MultiPoly& o) const {
        return reg_.get() == o.reg_.get() && terms_ == o.terms_;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly operator-() const {
        MultiPoly r(reg_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        check_same_registry(reg_, o.reg_);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        check_same_registry(reg_, o.reg_);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        check_same_registry(a.reg_, b.reg_);
        MultiPoly r(a.reg_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly operator*(const Rat& s) const {
        MultiPoly r(reg_);
        if (s == 0) return r;
        for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
        return r;
    }
    MultiPoly operator/(const Rat& s) const {
        if (s == 0) throw ZeroDenominator("division of polynomial by zero rational");
        return *this * (Rat(1) / s);
    }

    MultiPoly pow(unsigned n) const {
        MultiPoly r = constant(reg_, 1);
        MultiPoly base = *this;
        while (n) {
            if (n & 1u) r *= base;
            base = (n >>= 1) ? base * base : base;
        }
        return r;
    }

    // Partial derivative with respect to a registry name.
    MultiPoly derivative(const std::string& var) const {
        std::size_t v = static_cast<std::size_t>(reg_->require(var));
        MultiPoly r(reg_);
        for (const auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            ExpVec d = e;
            d[v] -= 1;
            r.add_term(d, c * Rat(e[v]));
        }
        return r;
    }

    int degree_in(const std::string& var) const { return degree_in(reg_->require(var)); }
    int degree_in(int v) const {
        int d = -1;  // -1 for the zero polynomial
        for (const auto& [e, c] : terms_)
            d = std::max(d, static_cast<int>(e[static_cast<std::size_t>(v)]));
        return d;
    }

    int total_deg() const {
        return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.rbegin()->first));
    }

    bool uses(int v) const {
        for (const auto& [e, c] : terms_)
            if (e[static_cast<std::size_t>(v)] > 0) return true;
        return false;
    }

    // Coefficient of var^k, as a polynomial in the remaining names.
    MultiPoly coeff_of_power(int v, unsigned k) const {
        MultiPoly r(reg_);
        for (const auto& [e, c] : terms_) {
            if (e[static_cast<std::size_t>(v)] != k) continue;
            ExpVec f = e;
            f[static_cast<std::size_t>(v)] = 0;
            r.terms_[f] = c;
        }
        return r;
    }

    MultiPoly leading_coeff_in(int v) const {
        int d = degree_in(v);
        if (d < 0) return MultiPoly(reg_);
        return coeff_of_power(v, static_cast<unsigned>(d));
    }

    // Multiply by var^k.
    MultiPoly shift(int v, unsigned k) const {
        MultiPoly r(reg_);
        for (const auto& [e, c] : terms_) {
            ExpVec f = e;
            f[static_cast<std::size_t>(v)] += k;
            r.terms_[f] = c;
        }
        return r;
    }

    // Substitute polynomials for a subset of names (all at once).
    MultiPoly substitute(const std::map<std::string, MultiPoly>& bindings) const {
        std::map<int, const MultiPoly*> by_index;
        for (const auto& [n, p] : bindings) {
            check_same_registry(reg_, p.registry());
            by_index[reg_->require(n)] = &p;
        }
        MultiPoly r(reg_);
        for (const auto& [e, c] : terms_) {
            ExpVec rest = e;
            MultiPoly term = constant(reg_, c);
            for (const auto& [v, p] : by_index) {
                unsigned k = e[static_cast<std::size_t>(v)];
                rest[static_cast<std::size_t>(v)] = 0;
                if (k) term *= p->pow(k);
            }
            r += term * monomial(reg_, rest, Rat(1));
        }
        return r;
    }

    // Positive rational content (gcd of coefficients); 0 for the zero poly.
    Rat content() const {
        Rat g(0);
        for (const auto& [e, c] : terms_) {
            g = rat_content_gcd(g, c);
            if (g == 1) break;
        }
        return g;
    }

    // Exact division; throws if the division is not exact.
    MultiPoly divide_exact(const MultiPoly& b) const {
        check_same_registry(reg_, b.reg_);
        if (b.is_zero()) throw ZeroDenominator("exact division by zero polynomial");
        if (b.is_constant()) return *this / b.constant_value();
        MultiPoly rem = *this;
        MultiPoly q(reg_);
        const auto& [eb, cb] = b.leading();
        while (!rem.is_zero()) {
            const auto& [ea, ca] = rem.leading();
            ExpVec e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (ea[i] < eb[i]) throw Error("inexact polynomial division");
                e[i] = ea[i] - eb[i];
            }
            MultiPoly t = monomial(reg_, e, ca / cb);
            q += t;
            rem -= t * b;
        }
        return q;
    }

    std::string to_string() const;

private:
    void add_term(const ExpVec& e, const Rat& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    RegistryPtr reg_;
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// Canonical string form: grlex-descending terms, explicit ^ powers.
// ---------------------------------------------------------------------------

inline std::string MultiPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const ExpVec& e = it->first;
        Rat c = it->second;
        bool neg = c < 0;
        if (first) {
            if (neg) out << "-";
        } else {
            out << (neg ? "-" : "+");
        }
        first = false;
        Rat a = neg ? Rat(-c) : c;
        std::vector<std::string> factors;
        if (a != 1 || total_degree(e) == 0) factors.push_back(a.get_str());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            std::string f = reg_->name(i);
            if (e[i] > 1) f += "^" + std::to_string(e[i]);
            factors.push_back(f);
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out << "*";
            out << factors[i];
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Multivariate gcd via content/primitive-part recursion and the
// subresultant polynomial remainder sequence.
// ---------------------------------------------------------------------------

namespace detail {

// Quotient of an exact division, or false if the division is not exact.
inline bool try_divide(const MultiPoly& a, const MultiPoly& b, MultiPoly* q) {
    if (b.is_zero()) return false;
    if (b.is_constant()) {
        *q = a / b.constant_value();
        return true;
    }
    MultiPoly rem = a;
    MultiPoly quo(a.registry());
    const auto& [eb, cb] = b.leading();
    while (!rem.is_zero()) {
        const auto& [ea, ca] = rem.leading();
        ExpVec e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (ea[i] < eb[i]) return false;
            e[i] = ea[i] - eb[i];
        }
        MultiPoly t = MultiPoly::monomial(a.registry(), e, ca / cb);
        quo += t;
        rem -= t * b;
    }
    *q = std::move(quo);
    return true;
}

// Dense coefficients in v after substituting integers for every other name;
// trailing zeros trimmed, empty for the zero image.
inline std::vector<Rat> eval_except(const MultiPoly& p, int v,
                                    const std::vector<long>& vals) {
    std::size_t n = p.registry()->size();
    // Per-variable power tables, grown on demand.
    std::vector<std::vector<Rat>> pw(n);
    for (std::size_t i = 0; i < n; ++i) pw[i].push_back(Rat(1));
    std::vector<Rat> out(static_cast<std::size_t>(p.degree_in(v)) + 1, Rat(0));
    for (const auto& [e, c] : p.terms()) {
        Rat t = c;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == static_cast<std::size_t>(v) || e[i] == 0) continue;
            while (pw[i].size() <= e[i]) pw[i].push_back(pw[i].back() * vals[i]);
            t *= pw[i][e[i]];
        }
        out[e[static_cast<std::size_t>(v)]] += t;
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

// Monic univariate gcd over Q of dense coefficient vectors.
inline std::vector<Rat> uni_gcd(std::vector<Rat> a, std::vector<Rat> b) {
    while (!b.empty()) {
        // a mod b
        Rat lead = b.back();
        while (a.size() >= b.size()) {
            Rat f = a.back() / lead;
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
            while (!a.empty() && a.back() == 0) a.pop_back();
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

inline std::mt19937& gcd_rng() {
    static std::mt19937 rng(0x51f5u);
    return rng;
}

// lc(b,v)^(deg_v a - deg_v b + 1) * a = q*b + prem; only prem is returned.
inline MultiPoly pseudo_rem(const MultiPoly& a, const MultiPoly& b, int v) {
    int db = b.degree_in(v);
    MultiPoly lcb = b.coeff_of_power(v, static_cast<unsigned>(db));
    MultiPoly r = a;
    int e = a.degree_in(v) - db + 1;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        int dr = r.degree_in(v);
        MultiPoly lcr = r.coeff_of_power(v, static_cast<unsigned>(dr));
        r = lcb * r - (lcr * b).shift(v, static_cast<unsigned>(dr - db));
        --e;
    }
    for (; e > 0; --e) r = lcb * r;
    return r;
}

MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b);

// Content of p with respect to variable v: gcd of the coefficient polynomials.
inline MultiPoly content_in(const MultiPoly& p, int v) {
    MultiPoly g(p.registry());
    int d = p.degree_in(v);
    for (int k = 0; k <= d; ++k) {
        MultiPoly c = p.coeff_of_power(v, static_cast<unsigned>(k));
        if (c.is_zero()) continue;
        g = gcd_impl(g, c);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

// Normalize to positive leading coefficient and rational content 1.
inline MultiPoly make_primitive(const MultiPoly& p) {
    if (p.is_zero()) return p;
    Rat c = p.content();
    if (p.leading_coeff() < 0) c = -c;
    return p / c;
}

inline MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return make_primitive(b);
    if (b.is_zero()) return make_primitive(a);
    MultiPoly pa = make_primitive(a), pb = make_primitive(b);
    if (pa.is_constant() || pb.is_constant())
        return MultiPoly::constant(a.registry(), 1);
    if (pa == pb) return pa;

    // Variables used by both operands; only these can appear in the gcd.
    const auto& reg = a.registry();
    std::vector<int> shared;
    for (std::size_t i = 0; i < reg->size(); ++i)
        if (pa.degree_in(static_cast<int>(i)) > 0 &&
            pb.degree_in(static_cast<int>(i)) > 0)
            shared.push_back(static_cast<int>(i));
    if (shared.empty()) return MultiPoly::constant(reg, 1);

    // Divisibility fast path: in practice one operand frequently divides the
    // other (powers of a shared factor from denominator arithmetic).
    {
        MultiPoly q(reg);
        const ExpVec &la = pa.leading().first, &lb = pb.leading().first;
        bool b_le_a = true, a_le_b = true;
        for (std::size_t i = 0; i < la.size(); ++i) {
            if (lb[i] > la[i]) b_le_a = false;
            if (la[i] > lb[i]) a_le_b = false;
        }
        if (b_le_a && try_divide(pa, pb, &q)) return pb;
        if (a_le_b && try_divide(pb, pa, &q)) return pa;
    }

    // Evaluation probe per shared variable: substitute random integers for
    // everything but w and take a univariate gcd over Q. When the images keep
    // full degree in w, the image of the true gcd divides the image gcd, so a
    // constant image gcd proves the gcd is free of w. If that holds for every
    // shared variable the gcd is constant, which settles the common coprime
    // case without a remainder sequence.
    int v = -1;  // main variable for the remainder sequence
    {
        std::uniform_int_distribution<long> pick(2, 1 << 20);
        bool free_of_all = true;
        for (int w : shared) {
            bool conclusive = false;
            for (int attempt = 0; attempt < 3 && !conclusive; ++attempt) {
                std::vector<long> vals(reg->size());
                for (auto& x : vals) x = pick(gcd_rng());
                std::vector<Rat> ia = eval_except(pa, w, vals);
                std::vector<Rat> ib = eval_except(pb, w, vals);
                if (static_cast<int>(ia.size()) != pa.degree_in(w) + 1 ||
                    static_cast<int>(ib.size()) != pb.degree_in(w) + 1)
                    continue;  // a leading coefficient vanished, resample
                conclusive = uni_gcd(std::move(ia), std::move(ib)).size() == 1;
            }
            if (!conclusive) {
                free_of_all = false;
                if (v < 0 || std::min(pa.degree_in(w), pb.degree_in(w)) <
                                 std::min(pa.degree_in(v), pb.degree_in(v)))
                    v = w;
            }
        }
        if (free_of_all) return MultiPoly::constant(reg, 1);
    }

    MultiPoly ca = content_in(pa, v), cb = content_in(pb, v);
    MultiPoly cg = gcd_impl(ca, cb);
    MultiPoly fa = pa.divide_exact(ca), fb = pb.divide_exact(cb);

    // Subresultant PRS on the primitive parts.
    MultiPoly F = fa, G = fb;
    if (F.degree_in(v) < G.degree_in(v)) std::swap(F, G);
    MultiPoly g = MultiPoly::constant(reg, 1);
    MultiPoly h = MultiPoly::constant(reg, 1);
    while (true) {
        int delta = F.degree_in(v) - G.degree_in(v);
        MultiPoly R = pseudo_rem(F, G, v);
        if (R.is_zero()) {
            MultiPoly gv = G.divide_exact(content_in(G, v));
            return make_primitive(cg * gv);
        }
        if (R.degree_in(v) == 0) return make_primitive(cg);
        MultiPoly divisor = g;
        for (int i = 0; i < delta; ++i) divisor *= h;
        F = G;
        G = R.divide_exact(divisor);
        g = F.leading_coeff_in(v);
        if (delta > 0) {
            MultiPoly num = g.pow(static_cast<unsigned>(delta));
            h = (delta > 1) ? num.divide_exact(h.pow(static_cast<unsigned>(delta - 1)))
                            : num;
        }
    }
}

}  // namespace detail

// Primitive positive-lead gcd; gcd(p, 0) = normalized p.
inline MultiPoly gcd_poly(const MultiPoly& a, const MultiPoly& b) {
    check_same_registry(a.registry(), b.registry());
    return detail::gcd_impl(a, b);
}

inline MultiPoly lcm_poly(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return MultiPoly(a.registry());
    return a.divide_exact(gcd_poly(a, b)) * b;
}

}  // namespace intwist

#endif
