#ifndef INTWIST_COHOMOLOGY_HPP
#define INTWIST_COHOMOLOGY_HPP

#include <map>
#include <string>
#include <vector>

#include "groebner.hpp"
#include "linalg.hpp"
#include "ratfunc.hpp"

namespace intwist {

// Multivalued weight u = prod_i p_i^{g_i}: polynomial bases with exponents
// from the parameter field. Only d log u is ever used, which is rational.
struct TwistFactor {
    MultiPoly poly;
    RatFunc exponent;
};

class Twist {
public:
    explicit Twist(RegistryPtr reg) : reg_(std::move(reg)) {}

    void add_factor(MultiPoly p, RatFunc exponent) {
        check_same_registry(reg_, p.registry());
        factors_.push_back({std::move(p), std::move(exponent)});
    }

    const RegistryPtr& registry() const { return reg_; }
    const std::vector<TwistFactor>& factors() const { return factors_; }

    // Component of omega = d log u along one variable:
    // omega_v = sum_i g_i (d p_i / d v) / p_i.
    RatFunc omega_component(int var) const {
        RatFunc w(reg_);
        const std::string& name = reg_->name(static_cast<std::size_t>(var));
        for (const auto& f : factors_)
            w += f.exponent * RatFunc(f.poly.derivative(name), f.poly);
        return w;
    }

    Twist substituted(const std::map<std::string, MultiPoly>& bindings) const {
        Twist t(reg_);
        for (const auto& f : factors_)
            t.add_factor(f.poly.substitute(bindings), f.exponent);
        return t;
    }

private:
    RegistryPtr reg_;
    std::vector<TwistFactor> factors_;
};

inline RatFunc twist_connection(const Twist& t, int var) {
    return t.omega_component(var);
}

// Linear rotation mixing two variables:
//   zi -> c*zi + s*zj,   zj -> -s*zi + c*zj.
// The substitution is its own bookkeeping; the Jacobian factor c^2 + s^2 is
// constant and drops out of every quantity this library reports.
inline std::map<std::string, MultiPoly> rotation_map(const RegistryPtr& reg,
                                                     const std::string& zi,
                                                     const std::string& zj,
                                                     const Rat& c, const Rat& s) {
    MultiPoly vi = MultiPoly::variable(reg, zi);
    MultiPoly vj = MultiPoly::variable(reg, zj);
    return {{zi, vi * c + vj * s}, {zj, vi * (-s) + vj * c}};
}

inline Twist rotate_coordinates(const Twist& t, const std::string& zi,
                                const std::string& zj, const Rat& c, const Rat& s) {
    return t.substituted(rotation_map(t.registry(), zi, zj, c, s));
}

// Twisted cohomology data for the fibre spanned by `vars`: Groebner basis
// of the critical point ideal (numerators of the omega components), the
// standard monomials and the dimension.
struct CohomologyInfo {
    std::vector<GPoly> groebner;
    std::vector<Mono> monomials;
    std::size_t dim = 0;
};

inline CohomologyInfo cohomology_data(const Twist& t, const std::vector<int>& vars) {
    std::vector<GPoly> gens;
    for (int v : vars) {
        RatFunc w = t.omega_component(v);
        gens.push_back(GPoly::from_ratfunc(RatFunc(w.num()), vars));
    }
    CohomologyInfo info;
    info.groebner = buchberger(std::move(gens));
    info.monomials = standard_monomials(info.groebner, vars.size());
    info.dim = info.monomials.size();

    // The numerator ideal can pick up spurious zeros sitting on the divisor
    // u = 0, where omega is singular rather than critical. The quotient
    // algebra splits into local pieces per zero; multiplication by the
    // product P of the twist polynomials is nilpotent exactly on the divisor
    // pieces and invertible elsewhere, so the stable rank of its matrix
    // counts only the critical points in the complement.
    if (info.dim > 0) {
        RatFunc prod = RatFunc::constant(t.registry(), 1);
        for (const auto& f : t.factors()) prod *= RatFunc(f.poly);
        GPoly p = GPoly::from_ratfunc(prod, vars);
        std::map<Mono, std::size_t, GrevlexLess> index;
        for (std::size_t i = 0; i < info.dim; ++i) index[info.monomials[i]] = i;
        MatRF M(info.dim, VecRF(info.dim, RatFunc(t.registry())));
        for (std::size_t j = 0; j < info.dim; ++j) {
            GPoly mj(t.registry(), vars.size());
            mj.add_term(info.monomials[j], RatFunc::constant(t.registry(), 1));
            GPoly q = reduce_gpoly(gpoly_mul(mj, p), info.groebner);
            for (const auto& [m, c] : q.terms()) M[index.at(m)][j] = c;
        }
        std::size_t r = rank_exact(M);
        MatRF A = M;
        while (r > 0) {
            A = mat_mul(A, M);
            std::size_t r2 = rank_exact(A);
            if (r2 == r) break;
            r = r2;
        }
        info.dim = r;
    }
    return info;
}

inline std::size_t cohomology_dim(const Twist& t, const std::vector<int>& vars) {
    return cohomology_data(t, vars).dim;
}

// Standard monomials as rational functions over the full registry.
inline std::vector<RatFunc> monomial_basis(const RegistryPtr& reg,
                                           const std::vector<int>& vars,
                                           const std::vector<Mono>& monos) {
    std::vector<RatFunc> out;
    out.reserve(monos.size());
    for (const Mono& m : monos) {
        ExpVec e(reg->size(), 0);
        for (std::size_t i = 0; i < vars.size(); ++i)
            e[static_cast<std::size_t>(vars[i])] = m[i];
        out.push_back(RatFunc(MultiPoly::monomial(reg, e, Rat(1))));
    }
    return out;
}

}  // namespace intwist

#endif
