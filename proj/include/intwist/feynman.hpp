#ifndef INTWIST_FEYNMAN_HPP
#define INTWIST_FEYNMAN_HPP

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "intersect.hpp"

namespace intwist {

// Linear combination of labeled momenta: label -> rational coefficient.
using MomLin = std::map<std::string, Rat>;

// One propagator: -q^2 + m^2 with q a momentum combination and m^2 an
// expression in the kinematic parameters.
struct PropSpec {
    MomLin momentum;
    RatFunc mass_sq;
};

// Symmetric table of the values of -a.b for momentum labels a, b.
class DotTable {
public:
    void set(const std::string& a, const std::string& b, RatFunc v) {
        table_.insert_or_assign(key(a, b), std::move(v));
    }
    const RatFunc& get(const std::string& a, const std::string& b) const {
        auto it = table_.find(key(a, b));
        if (it == table_.end())
            throw Error("missing scalar product for " + a + "." + b);
        return it->second;
    }
    bool has(const std::string& a, const std::string& b) const {
        return table_.count(key(a, b)) > 0;
    }

private:
    static std::pair<std::string, std::string> key(const std::string& a,
                                                   const std::string& b) {
        return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    }
    std::map<std::pair<std::string, std::string>, RatFunc> table_;
};

// Gram determinant det(-q_i.q_j) for momenta with known scalar products.
inline RatFunc gram_determinant(
    const std::vector<MomLin>& qs,
    const std::function<RatFunc(const std::string&, const std::string&)>& minus_dot) {
    if (qs.empty()) throw Error("empty Gram determinant");
    RatFunc probe = minus_dot(qs[0].begin()->first, qs[0].begin()->first);
    const RegistryPtr& reg = probe.registry();
    MatRF G(qs.size(), VecRF(qs.size(), RatFunc(reg)));
    for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = 0; j < qs.size(); ++j)
            for (const auto& [a, ca] : qs[i])
                for (const auto& [b, cb] : qs[j])
                    G[i][j] += minus_dot(a, b) * RatFunc::constant(reg, ca * cb);
    return det_exact(G);
}

// Baikov data for one integral family: the linear map z = C sigma + f from
// the independent scalar products sigma to the propagator variables, and the
// Baikov polynomial B(z) = G(k_1..k_l, p_1..p_e) after inverting that map.
class BaikovSetup {
public:
    BaikovSetup(RegistryPtr reg, std::vector<std::string> loops,
                std::vector<std::string> externals, DotTable dots,
                std::vector<PropSpec> props, std::vector<std::string> z_names)
        : reg_(std::move(reg)),
          loops_(std::move(loops)),
          externals_(std::move(externals)),
          dots_(std::move(dots)),
          props_(std::move(props)),
          z_names_(std::move(z_names)) {
        std::size_t l = loops_.size(), e = externals_.size();
        n_ = l * (l + 1) / 2 + e * l;
        if (props_.size() != n_)
            throw Error("expected " + std::to_string(n_) + " propagators, got " +
                        std::to_string(props_.size()));
        if (z_names_.size() != n_) throw Error("need one z name per propagator");
        build();
    }

    const RegistryPtr& registry() const { return reg_; }
    std::size_t n() const { return n_; }
    const MatRF& c_matrix() const { return C_; }
    const VecRF& f_vector() const { return f_; }
    const MultiPoly& baikov() const { return B_; }

    // Baikov polynomial with the listed variables set to zero.
    MultiPoly cut(const std::vector<std::string>& cut_vars) const {
        std::map<std::string, MultiPoly> zero;
        for (const auto& v : cut_vars) zero.emplace(v, MultiPoly(reg_));
        return B_.substitute(zero);
    }

private:
    // sigma ordering: (-k_i.k_j for i <= j), then (-k_i.p_j), loop-major.
    std::size_t sigma_index(std::size_t i, std::size_t j) const {
        std::size_t l = loops_.size();
        if (i > j) std::swap(i, j);
        return i * l - i * (i - 1) / 2 + (j - i);
    }
    std::size_t sigma_index_ext(std::size_t i, std::size_t j) const {
        std::size_t l = loops_.size();
        return l * (l + 1) / 2 + i * externals_.size() + j;
    }
    int loop_pos(const std::string& a) const {
        for (std::size_t i = 0; i < loops_.size(); ++i)
            if (loops_[i] == a) return static_cast<int>(i);
        return -1;
    }
    int ext_pos(const std::string& a) const {
        for (std::size_t i = 0; i < externals_.size(); ++i)
            if (externals_[i] == a) return static_cast<int>(i);
        return -1;
    }

    // -q.q' as (coefficients on sigma, purely external remainder).
    void expand(const MomLin& q1, const MomLin& q2, std::vector<Rat>& sig,
                RatFunc& rest) const {
        for (const auto& [a, ca] : q1)
            for (const auto& [b, cb] : q2) {
                int la = loop_pos(a), lb = loop_pos(b);
                Rat cc = ca * cb;
                if (la >= 0 && lb >= 0) {
                    sig[sigma_index(static_cast<std::size_t>(la),
                                    static_cast<std::size_t>(lb))] += cc;
                } else if (la >= 0 || lb >= 0) {
                    const std::string& lm = la >= 0 ? a : b;
                    const std::string& em = la >= 0 ? b : a;
                    int li = la >= 0 ? la : lb;
                    int ei = ext_pos(em);
                    if (ei < 0) throw Error("unknown momentum label: " + em);
                    sig[sigma_index_ext(static_cast<std::size_t>(li),
                                        static_cast<std::size_t>(ei))] += cc;
                } else {
                    if (ext_pos(a) < 0) throw Error("unknown momentum label: " + a);
                    if (ext_pos(b) < 0) throw Error("unknown momentum label: " + b);
                    rest += dots_.get(a, b) * RatFunc::constant(reg_, cc);
                }
            }
    }

    void build() {
        // z_s = C_{st} sigma_t + f_s.
        C_.assign(n_, VecRF(n_, RatFunc(reg_)));
        f_.assign(n_, RatFunc(reg_));
        for (std::size_t s = 0; s < n_; ++s) {
            std::vector<Rat> sig(n_, Rat(0));
            RatFunc rest(reg_);
            expand(props_[s].momentum, props_[s].momentum, sig, rest);
            for (std::size_t t = 0; t < n_; ++t)
                C_[s][t] = RatFunc::constant(reg_, sig[t]);
            f_[s] = rest + props_[s].mass_sq;
        }
        MatRF Cinv;
        try {
            Cinv = inverse_exact(C_);
        } catch (const SingularSystem&) {
            throw SingularCMatrix("propagators do not span the scalar products");
        }
        // sigma_t = (C^{-1})_{ts} (z_s - f_s).
        VecRF sigma(n_, RatFunc(reg_));
        for (std::size_t t = 0; t < n_; ++t)
            for (std::size_t s = 0; s < n_; ++s)
                sigma[t] += Cinv[t][s] *
                            (RatFunc::variable(reg_, z_names_[s]) - f_[s]);

        std::vector<MomLin> vecs;
        for (const auto& k : loops_) vecs.push_back({{k, Rat(1)}});
        for (const auto& p : externals_) vecs.push_back({{p, Rat(1)}});
        RatFunc det = gram_determinant(
            vecs, [&](const std::string& a, const std::string& b) -> RatFunc {
                int la = loop_pos(a), lb = loop_pos(b);
                if (la >= 0 && lb >= 0)
                    return sigma[sigma_index(static_cast<std::size_t>(la),
                                             static_cast<std::size_t>(lb))];
                if (la >= 0)
                    return sigma[sigma_index_ext(static_cast<std::size_t>(la),
                                                 static_cast<std::size_t>(ext_pos(b)))];
                if (lb >= 0)
                    return sigma[sigma_index_ext(static_cast<std::size_t>(lb),
                                                 static_cast<std::size_t>(ext_pos(a)))];
                return dots_.get(a, b);
            });
        if (det.den().total_deg() != 0)
            throw Error("Baikov determinant has a non-constant denominator");
        Rat dc = det.den().terms().begin()->second;
        B_ = det.num() * (Rat(1) / dc);
    }

    RegistryPtr reg_;
    std::vector<std::string> loops_, externals_;
    DotTable dots_;
    std::vector<PropSpec> props_;
    std::vector<std::string> z_names_;
    std::size_t n_ = 0;
    MatRF C_;
    VecRF f_;
    MultiPoly B_ = MultiPoly(reg_);
};

// Twist on a maximal cut: u = B_cut^exponent.
inline Twist maximal_cut_twist(const MultiPoly& b_cut, const RatFunc& exponent) {
    if (b_cut.is_zero()) throw Error("vanishing Baikov polynomial on the cut");
    if (exponent.is_zero())
        throw GenericityError("zero twist exponent is non-generic");
    Twist t(b_cut.registry());
    t.add_factor(b_cut, exponent);
    return t;
}

// Duals of a top-level basis e against candidates h: columns of h * C^{-1}
// with C_{jk} the full intersection matrix of e against h.
struct TopLevelDuals {
    std::vector<RatFunc> h;
    MatRF cinv;
};

inline TopLevelDuals top_level_duals(FibrationPlan& plan,
                                     const std::vector<RatFunc>& e,
                                     const std::vector<RatFunc>& h) {
    MatRF C = plan.intersection_matrix(e, h);
    TopLevelDuals d;
    d.h = h;
    try {
        d.cinv = inverse_exact(C);
    } catch (const SingularSystem&) {
        throw SingularCMatrix("top-level intersection matrix is singular");
    }
    return d;
}

// <phiL | d_j> for the dual d_j = sum_k h_k (C^{-1})_{kj}.
inline RatFunc pair_with_dual(FibrationPlan& plan, const RatFunc& phiL,
                              const TopLevelDuals& duals, std::size_t j) {
    RatFunc acc(plan.registry());
    for (std::size_t k = 0; k < duals.h.size(); ++k)
        acc += plan.intersection_number(phiL, duals.h[k]) * duals.cinv[k][j];
    return acc;
}

// Left-hand rows of the differential equation in one kinematic variable:
// row i is d/dx e_i + omega_x e_i + shift * e_i. Pure rational arithmetic,
// so the rows can be formed symbolically and specialised afterwards.
inline std::vector<RatFunc> de_rows(const Twist& t, const std::vector<RatFunc>& e,
                                    const std::string& kin_var,
                                    const RatFunc& prefactor_shift) {
    RatFunc omega_kin = t.omega_component(t.registry()->require(kin_var));
    std::vector<RatFunc> rows;
    rows.reserve(e.size());
    for (const auto& ei : e)
        rows.push_back(ei.derivative(kin_var) + omega_kin * ei +
                       prefactor_shift * ei);
    return rows;
}

// Pair prepared left rows against an already-computed dual set.
inline MatRF de_block_from_rows(FibrationPlan& plan,
                                const std::vector<RatFunc>& rows,
                                const TopLevelDuals& duals) {
    MatRF A(rows.size(), VecRF(duals.h.size(), RatFunc(plan.registry())));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < duals.h.size(); ++j)
            A[i][j] = pair_with_dual(plan, rows[i], duals, j);
    return A;
}

// Block of the differential-equation matrix in one kinematic variable:
// row i pairs d/dx e_i + omega_x e_i + shift * e_i against the duals of e.
inline MatRF de_matrix_block(FibrationPlan& plan, const std::vector<RatFunc>& e,
                             const std::string& kin_var, const RatFunc& prefactor_shift) {
    TopLevelDuals duals = top_level_duals(plan, e, e);
    return de_block_from_rows(plan, de_rows(plan.twist(), e, kin_var, prefactor_shift),
                              duals);
}

// Coefficient of one master integral in the reduction of a target cocycle:
// c_j = <target | d_j> over the span of the master basis.
inline RatFunc reduction_coefficient(FibrationPlan& plan, const RatFunc& target,
                                     const std::vector<RatFunc>& masters,
                                     std::size_t j) {
    TopLevelDuals duals = top_level_duals(plan, masters, masters);
    return pair_with_dual(plan, target, duals, j);
}

}  // namespace intwist

#endif
