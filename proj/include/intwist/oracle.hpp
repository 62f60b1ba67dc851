#ifndef INTWIST_ORACLE_HPP
#define INTWIST_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "intersect.hpp"

namespace intwist {

// Quad-precision complex floats: enough headroom above the 1e-8 / 1e-10
// validation tolerances to absorb cancellation in the residue sums.
using CFloat = boost::multiprecision::cpp_complex_quad;
using RFloat = CFloat::value_type;

inline RFloat to_rfloat(const Rat& r) {
    return RFloat(r.get_num().get_str()) / RFloat(r.get_den().get_str());
}

// Random rational parameter point for one numeric cross-check.
struct NumericSample {
    std::map<std::string, Rat> bindings;
    unsigned seed = 0;
    double tolerance = 1e-8;
};

inline Rat eval_poly_rat(const MultiPoly& p, const std::map<std::string, Rat>& b) {
    const RegistryPtr& reg = p.registry();
    Rat acc(0);
    for (const auto& [e, c] : p.terms()) {
        Rat t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            auto it = b.find(reg->name(i));
            if (it == b.end())
                throw Error("unbound name in rational evaluation: " + reg->name(i));
            for (unsigned k = 0; k < e[i]; ++k) t *= it->second;
        }
        acc += t;
    }
    return acc;
}

inline Rat eval_ratfunc_rat(const RatFunc& f, const std::map<std::string, Rat>& b) {
    Rat den = eval_poly_rat(f.den(), b);
    if (den == 0) throw ZeroDenominator("rational evaluation hit a pole");
    return eval_poly_rat(f.num(), b) / den;
}

// Evaluate with one registry variable bound to a complex number and all
// other appearing names bound rationally.
inline CFloat eval_poly_c(const MultiPoly& p, int var, const CFloat& z,
                          const std::map<std::string, Rat>& b) {
    const RegistryPtr& reg = p.registry();
    std::vector<CFloat> point(reg->size(), CFloat(0));
    std::vector<bool> bound(reg->size(), false);
    for (std::size_t i = 0; i < reg->size(); ++i) {
        if (static_cast<int>(i) == var) {
            point[i] = z;
            bound[i] = true;
        } else if (auto it = b.find(reg->name(i)); it != b.end()) {
            point[i] = CFloat(to_rfloat(it->second));
            bound[i] = true;
        }
    }
    CFloat acc(0);
    for (const auto& [e, c] : p.terms()) {
        CFloat t(to_rfloat(c));
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!bound[i]) throw Error("unbound name in numeric evaluation: " + reg->name(i));
            for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
        }
        acc += t;
    }
    return acc;
}

inline CFloat eval_ratfunc_c(const RatFunc& f, int var, const CFloat& z,
                             const std::map<std::string, Rat>& b) {
    return eval_poly_c(f.num(), var, z, b) / eval_poly_c(f.den(), var, z, b);
}

// Dense complex polynomial, ascending coefficients.
struct CPoly {
    std::vector<CFloat> c;

    int deg() const { return static_cast<int>(c.size()) - 1; }
    CFloat eval(const CFloat& z) const {
        CFloat acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        return acc;
    }
    CPoly derivative() const {
        CPoly d;
        for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(CFloat(i) * c[i]);
        return d;
    }
    void trim(const RFloat& eps) {
        RFloat scale(0);
        for (const auto& x : c) scale = (std::max)(scale, abs(x));
        while (!c.empty() && abs(c.back()) <= eps * scale) c.pop_back();
    }
};

// Coefficient list of a univariate slice of an exact polynomial at a sample.
inline CPoly cpoly_at(const MultiPoly& p, int var, const std::map<std::string, Rat>& b) {
    CPoly out;
    int d = p.degree_in(var);
    for (int k = 0; k <= d; ++k)
        out.c.push_back(eval_poly_c(p.coeff_of_power(var, static_cast<unsigned>(k)),
                                    var, CFloat(0), b));
    out.trim(RFloat("1e-30"));
    return out;
}

// All complex roots by the Aberth-Ehrlich simultaneous iteration.
inline std::vector<CFloat> all_roots(CPoly p) {
    p.trim(RFloat("1e-30"));
    int d = p.deg();
    if (d <= 0) return {};
    for (auto& x : p.c) x /= p.c.back();
    RFloat radius(1);
    for (int i = 0; i < d; ++i) radius = (std::max)(radius, abs(p.c[static_cast<std::size_t>(i)]));
    radius += 1;

    const RFloat pi = boost::math::constants::pi<RFloat>();
    std::vector<CFloat> z(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        RFloat ang = 2 * pi * (RFloat(k) + RFloat("0.357")) / d;
        z[static_cast<std::size_t>(k)] = radius * CFloat(cos(ang), sin(ang));
    }
    CPoly dp = p.derivative();
    for (int iter = 0; iter < 400; ++iter) {
        RFloat worst(0);
        for (int k = 0; k < d; ++k) {
            auto& zk = z[static_cast<std::size_t>(k)];
            CFloat pv = p.eval(zk);
            if (abs(pv) == 0) continue;
            CFloat dv = dp.eval(zk);
            if (abs(dv) == 0) {
                zk += CFloat(RFloat("1e-20"), RFloat("1e-20"));
                continue;
            }
            CFloat w = pv / dv;
            CFloat s(0);
            for (int j = 0; j < d; ++j)
                if (j != k) s += CFloat(1) / (zk - z[static_cast<std::size_t>(j)]);
            CFloat denom = CFloat(1) - w * s;
            CFloat step = (abs(denom) == 0) ? w : w / denom;
            zk -= step;
            worst = (std::max)(worst, abs(step) / (1 + abs(zk)));
        }
        if (worst < RFloat("1e-30")) break;
    }
    return z;
}

inline RFloat min_pairwise_distance(const std::vector<CFloat>& pts) {
    RFloat best("1e100");
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = (std::min)(best, abs(pts[i] - pts[j]));
    return best;
}

namespace detail {

// Residue of G around a point via a trapezoidal contour integral; spectrally
// accurate and indifferent to the pole order inside the circle.
inline CFloat contour_residue(const RatFunc& G, int var, const CFloat& center,
                              const RFloat& radius, const std::map<std::string, Rat>& b) {
    const int m = 256;
    const RFloat pi = boost::math::constants::pi<RFloat>();
    CFloat acc(0);
    for (int k = 0; k < m; ++k) {
        RFloat ang = 2 * pi * k / m;
        CFloat w = radius * CFloat(cos(ang), sin(ang));
        acc += eval_ratfunc_c(G, var, center + w, b) * w;
    }
    return acc / m;
}

// Residue at infinity of a univariate rational function: minus the 1/z
// coefficient of the expansion at infinity, read off the division remainder.
inline CFloat residue_at_infinity(const CPoly& num, const CPoly& den) {
    CPoly r = num;
    r.trim(RFloat("1e-30"));
    CPoly d = den;
    d.trim(RFloat("1e-30"));
    while (r.deg() >= d.deg() && r.deg() >= 0) {
        CFloat q = r.c.back() / d.c.back();
        int shift = r.deg() - d.deg();
        for (int i = 0; i <= d.deg(); ++i)
            r.c[static_cast<std::size_t>(i + shift)] -= q * d.c[static_cast<std::size_t>(i)];
        r.c.pop_back();
        r.trim(RFloat("1e-30"));
    }
    if (r.deg() != d.deg() - 1) return CFloat(0);
    return -r.c.back() / d.c.back();
}

}  // namespace detail

// Numeric univariate generalised intersection number at a rational sample.
// Two independent evaluations are compared:
//  (a) minus the sum over the roots of the critical polynomial P of the
//      residues of Q*phiL*adj(Om)*phiR / P, and
//  (b) the sum of the residues of phiL*Om^{-1}*phiR at the singular points
//      of Om plus the residue at infinity;
// they agree because the total residue of a rational one-form vanishes.
inline CFloat numeric_univariate_intersection(const MatRF& Om, const VecRF& phiL,
                                              const VecRF& phiR, int var,
                                              const NumericSample& sample) {
    RatFunc det = det_exact(Om);
    if (det.is_zero()) throw DegenerateFibration("vanishing connection determinant");
    MatRF adj = adjugate_exact(Om);
    const RegistryPtr& reg = det.registry();

    RatFunc S(reg);
    for (std::size_t i = 0; i < phiL.size(); ++i)
        for (std::size_t j = 0; j < phiR.size(); ++j)
            S += phiL[i] * adj[i][j] * phiR[j];
    RatFunc f = RatFunc(det.den()) * S;

    CPoly P = cpoly_at(det.num(), var, sample.bindings);
    CPoly Pd = P.derivative();
    std::vector<CFloat> proots = all_roots(P);
    RFloat guard("1e-6");
    if (min_pairwise_distance(proots) < guard)
        throw RootClustering("critical points cluster at the sample");

    CFloat a(0);
    for (const auto& r : proots) {
        CFloat denv = eval_poly_c(f.den(), var, r, sample.bindings);
        if (abs(denv) < RFloat("1e-20"))
            throw RootClustering("critical point collides with a pole of the integrand");
        a -= (eval_poly_c(f.num(), var, r, sample.bindings) / denv) / Pd.eval(r);
    }

    // Path (b): split the reduced denominator of G = S/det into its critical
    // part (shared with P) and the singular part; residues are taken around
    // the singular part only, with higher-order clusters handled by contour
    // integration around the whole cluster.
    RatFunc G = S / det;
    MultiPoly ds = G.den();
    MultiPoly pnum = det.num();
    for (;;) {
        MultiPoly g = gcd_poly(ds, pnum);
        if (g.total_deg() == 0) break;
        ds = ds.divide_exact(g);
    }
    std::vector<CFloat> spoles = all_roots(cpoly_at(ds, var, sample.bindings));
    // Cluster coincident poles.
    std::vector<std::vector<CFloat>> clusters;
    for (const auto& p : spoles) {
        bool placed = false;
        for (auto& cl : clusters)
            if (abs(p - cl.front()) < guard) {
                cl.push_back(p);
                placed = true;
                break;
            }
        if (!placed) clusters.push_back({p});
    }
    CFloat b = detail::residue_at_infinity(cpoly_at(G.num(), var, sample.bindings),
                                           cpoly_at(G.den(), var, sample.bindings));
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        CFloat center(0);
        for (const auto& p : clusters[i]) center += p;
        center /= CFloat(clusters[i].size());
        RFloat radius("1e-2");
        for (std::size_t j = 0; j < clusters.size(); ++j)
            if (j != i) radius = (std::min)(radius, abs(center - clusters[j].front()) / 2);
        for (const auto& r : proots) radius = (std::min)(radius, abs(center - r) / 2);
        if (radius < guard / 2)
            throw RootClustering("singular point collides with a critical point");
        b += detail::contour_residue(G, var, center, radius, sample.bindings);
    }

    RFloat scale = (std::max)(RFloat(1), abs(a));
    if (abs(a - b) > RFloat(sample.tolerance) * scale)
        throw ToleranceExceeded("residue-sum consistency check failed");
    return a;
}

// End-to-end numeric intersection number: inner fibration levels are taken
// from the exact plan, the outermost univariate step is evaluated
// numerically at the sample.
inline CFloat numeric_intersection(FibrationPlan& plan, const RatFunc& phiL,
                                   const RatFunc& phiR, const NumericSample& sample) {
    std::size_t n = plan.levels();
    VecRF L = plan.expand_left(n, phiL);
    VecRF R = plan.expand_right(n, phiR);
    const MatRF& Om = plan.omega(n);
    int var = plan.level_var(n);
    L = reduce_to_simple_poles(std::move(L), mat_transpose(Om), var);
    R = reduce_to_simple_poles(std::move(R), mat_neg(Om), var);
    return numeric_univariate_intersection(Om, L, R, var, sample);
}

// Random rational bindings for the free parameters, rejecting points where
// any twist exponent degenerates to an integer.
inline NumericSample make_sample(const Twist& twist, const std::vector<std::string>& params,
                                 unsigned seed, double tolerance = 1e-8) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num_dist(-24, 24);
    std::uniform_int_distribution<int> den_dist(2, 12);
    NumericSample s;
    s.seed = seed;
    s.tolerance = tolerance;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        s.bindings.clear();
        for (const auto& p : params) {
            int n = 0;
            while (n == 0) n = num_dist(rng);
            s.bindings[p] = Rat(n, den_dist(rng));
        }
        bool ok = true;
        for (const auto& factor : twist.factors()) {
            try {
                if (rat_is_integer(eval_ratfunc_rat(factor.exponent, s.bindings))) ok = false;
            } catch (const ZeroDenominator&) {
                ok = false;
            }
            if (!ok) break;
        }
        if (ok) return s;
    }
    throw GenericityError("could not draw a generic parameter sample");
}

struct OracleRecord {
    NumericSample sample;
    CFloat numeric;
    Rat exact_at_sample;
    double rel_err = 0;
};

// Cross-check an exact intersection number against the numeric pipeline at
// random samples; RootClustering triggers up to five resamples per record.
inline std::vector<OracleRecord> oracle_check(FibrationPlan& plan, const RatFunc& phiL,
                                              const RatFunc& phiR, const RatFunc& exact,
                                              const std::vector<std::string>& params,
                                              int nsamples, unsigned seed,
                                              double tolerance = 1e-8) {
    std::vector<OracleRecord> out;
    for (int i = 0; i < nsamples; ++i) {
        OracleRecord rec;
        bool done = false;
        for (int attempt = 0; attempt < 5 && !done; ++attempt) {
            unsigned s = seed + 1000003u * static_cast<unsigned>(i) + static_cast<unsigned>(attempt);
            rec.sample = make_sample(plan.twist(), params, s, tolerance);
            try {
                rec.exact_at_sample = eval_ratfunc_rat(exact, rec.sample.bindings);
                rec.numeric = numeric_intersection(plan, phiL, phiR, rec.sample);
                done = true;
            } catch (const RootClustering&) {
            } catch (const ZeroDenominator&) {
            }
        }
        if (!done)
            throw RootClustering("no usable sample after five attempts");
        RFloat ex = to_rfloat(rec.exact_at_sample);
        RFloat scale = (std::max)(RFloat(1), abs(ex));
        RFloat err = abs(rec.numeric - CFloat(ex)) / scale;
        rec.rel_err = err.convert_to<double>();
        if (err > RFloat(tolerance))
            throw ToleranceExceeded("numeric oracle disagrees with the exact result");
        out.push_back(rec);
    }
    return out;
}

}  // namespace intwist

#endif
