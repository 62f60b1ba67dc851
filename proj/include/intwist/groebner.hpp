#ifndef INTWIST_GROEBNER_HPP
#define INTWIST_GROEBNER_HPP

#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "ratfunc.hpp"

namespace intwist {

// Monomial in a chosen subset of registry names (the active fiber
// variables); exponents are positional within that subset.
using Mono = std::vector<unsigned>;

// Graded reverse lexicographic order.
struct GrevlexLess {
    bool operator()(const Mono& a, const Mono& b) const {
        unsigned ta = 0, tb = 0;
        for (unsigned e : a) ta += e;
        for (unsigned e : b) tb += e;
        if (ta != tb) return ta < tb;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] > b[i];
        return false;
    }
};

// Polynomial in the active variables with coefficients in the field of
// rational functions of everything else (parameters and spectator names).
class GPoly {
public:
    using TermMap = std::map<Mono, RatFunc, GrevlexLess>;

    GPoly(RegistryPtr reg, std::size_t nvars) : reg_(std::move(reg)), n_(nvars) {}

    // Split a rational function over the active variables: the denominator
    // must be free of them; numerator terms are regrouped by their active
    // exponents.
    static GPoly from_ratfunc(const RatFunc& f, const std::vector<int>& vars) {
        GPoly g(f.registry(), vars.size());
        for (int v : vars)
            if (f.den().uses(v))
                throw Error("denominator depends on an active variable");
        RatFunc inv_den = RatFunc(f.den()).inverse();
        for (const auto& [e, c] : f.num().terms()) {
            Mono m(vars.size());
            ExpVec rest = e;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                m[i] = e[static_cast<std::size_t>(vars[i])];
                rest[static_cast<std::size_t>(vars[i])] = 0;
            }
            g.add_term(m, RatFunc(MultiPoly::monomial(f.registry(), rest, c)) * inv_den);
        }
        return g;
    }

    const RegistryPtr& registry() const { return reg_; }
    std::size_t nvars() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    const Mono& lead_mono() const { return terms_.rbegin()->first; }
    const RatFunc& lead_coeff() const { return terms_.rbegin()->second; }

    GPoly& operator-=(const GPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    // this -= c * x^m * g
    void axpy(const RatFunc& c, const Mono& m, const GPoly& g) {
        for (const auto& [gm, gc] : g.terms_) {
            Mono s(n_);
            for (std::size_t i = 0; i < n_; ++i) s[i] = gm[i] + m[i];
            add_term(s, -(c * gc));
        }
    }

    GPoly monic() const {
        GPoly r(reg_, n_);
        if (is_zero()) return r;
        RatFunc inv = lead_coeff().inverse();
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * inv);
        return r;
    }

    // Scale by a nonzero field element so every coefficient is a content-free
    // polynomial in the parameters: coefficient fractions feed back into gcd
    // work during basis computations, polynomials do not.
    GPoly cleared() const {
        GPoly r(reg_, n_);
        if (is_zero()) return r;
        MultiPoly L = MultiPoly::constant(reg_, 1);
        for (const auto& [m, c] : terms_) L = lcm_poly(L, c.den());
        std::vector<MultiPoly> nums;
        nums.reserve(terms_.size());
        MultiPoly g(reg_);
        for (const auto& [m, c] : terms_) {
            nums.push_back(c.num() * L.divide_exact(c.den()));
            g = gcd_poly(g, nums.back());
        }
        if (nums.back().leading_coeff() < 0) g = -g;  // positive lead coeff
        std::size_t i = 0;
        for (const auto& [m, c] : terms_)
            r.terms_.emplace(m, RatFunc(nums[i++].divide_exact(g)));
        return r;
    }

    void add_term(const Mono& m, const RatFunc& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

private:
    RegistryPtr reg_;
    std::size_t n_;
    TermMap terms_;
};

namespace detail {

inline bool mono_divides(const Mono& a, const Mono& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
    Mono r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

}  // namespace detail

inline GPoly gpoly_mul(const GPoly& a, const GPoly& b) {
    GPoly r(a.registry(), a.nvars());
    for (const auto& [m, c] : a.terms()) r.axpy(-c, m, b);
    return r;
}

// Normal form of f modulo the (not necessarily complete) basis G.
inline GPoly reduce_gpoly(GPoly f, const std::vector<GPoly>& G) {
    GPoly r(f.registry(), f.nvars());
    while (!f.is_zero()) {
        bool reduced = false;
        for (const auto& g : G) {
            if (!detail::mono_divides(g.lead_mono(), f.lead_mono())) continue;
            Mono q(f.nvars());
            for (std::size_t i = 0; i < q.size(); ++i)
                q[i] = f.lead_mono()[i] - g.lead_mono()[i];
            f.axpy(f.lead_coeff() / g.lead_coeff(), q, g);
            reduced = true;
            break;
        }
        if (!reduced) {
            r.add_term(f.lead_mono(), f.lead_coeff());
            GPoly lt(f.registry(), f.nvars());
            lt.add_term(f.lead_mono(), f.lead_coeff());
            f -= lt;
        }
    }
    return r;
}

// Buchberger's algorithm with the coprime-leading-term criterion; returns a
// reduced Groebner basis with monic generators.
inline std::vector<GPoly> buchberger(std::vector<GPoly> gens) {
    std::vector<GPoly> G;
    for (auto& g : gens)
        if (!g.is_zero()) G.push_back(g.cleared());
    if (G.empty()) return G;

    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t j = i + 1; j < G.size(); ++j) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        const Mono &mi = G[i].lead_mono(), &mj = G[j].lead_mono();
        // Buchberger's first criterion: coprime leading monomials.
        bool coprime = true;
        for (std::size_t k = 0; k < mi.size(); ++k)
            if (mi[k] && mj[k]) { coprime = false; break; }
        if (coprime) continue;

        Mono l = detail::mono_lcm(mi, mj);
        Mono qi(l.size()), qj(l.size());
        for (std::size_t k = 0; k < l.size(); ++k) {
            qi[k] = l[k] - mi[k];
            qj[k] = l[k] - mj[k];
        }
        // S-polynomial of the (not necessarily monic) pair.
        GPoly s(G[i].registry(), G[i].nvars());
        s.axpy(-G[j].lead_coeff(), qi, G[i]);
        s.axpy(G[i].lead_coeff(), qj, G[j]);
        GPoly r = reduce_gpoly(std::move(s), G);
        if (r.is_zero()) continue;
        G.push_back(r.cleared());
        for (std::size_t k = 0; k + 1 < G.size(); ++k)
            pairs.emplace_back(k, G.size() - 1);
    }

    // Minimalize: drop generators whose leading term is divisible by another.
    std::vector<GPoly> minimal;
    for (std::size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < G.size(); ++j) {
            if (i == j) continue;
            if (detail::mono_divides(G[j].lead_mono(), G[i].lead_mono()) &&
                !(j > i && G[j].lead_mono() == G[i].lead_mono())) {
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(G[i]);
    }
    // Full reduction of the tails.
    std::vector<GPoly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<GPoly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        reduced.push_back(reduce_gpoly(minimal[i], others).monic());
    }
    return reduced;
}

// Monomials outside the leading-term ideal, in ascending grevlex order.
// Throws NotZeroDimensional unless every active variable has a pure power
// among the leading terms.
inline std::vector<Mono> standard_monomials(const std::vector<GPoly>& G,
                                            std::size_t nvars) {
    std::vector<unsigned> bound(nvars, 0);
    std::vector<bool> have(nvars, false);
    for (const auto& g : G) {
        const Mono& m = g.lead_mono();
        int nz = -1;
        for (std::size_t i = 0; i < nvars; ++i) {
            if (m[i]) {
                if (nz >= 0) { nz = -2; break; }
                nz = static_cast<int>(i);
            }
        }
        if (nz == -1) return {};  // 1 is in the ideal
        if (nz >= 0) {
            have[static_cast<std::size_t>(nz)] = true;
            auto& b = bound[static_cast<std::size_t>(nz)];
            b = b ? std::min(b, m[static_cast<std::size_t>(nz)])
                  : m[static_cast<std::size_t>(nz)];
        }
    }
    for (std::size_t i = 0; i < nvars; ++i)
        if (!have[i])
            throw NotZeroDimensional("critical point ideal is not zero-dimensional");

    std::vector<Mono> out;
    Mono cur(nvars, 0);
    // Enumerate the box below the pure-power bounds, keep what survives.
    std::size_t i = 0;
    while (true) {
        bool divisible = false;
        for (const auto& g : G)
            if (detail::mono_divides(g.lead_mono(), cur)) { divisible = true; break; }
        if (!divisible) out.push_back(cur);
        for (i = 0; i < nvars; ++i) {
            if (++cur[i] < bound[i]) break;
            cur[i] = 0;
        }
        if (i == nvars) break;
    }
    std::sort(out.begin(), out.end(), GrevlexLess{});
    return out;
}

}  // namespace intwist

#endif
