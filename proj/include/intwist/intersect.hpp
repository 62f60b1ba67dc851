#ifndef INTWIST_INTERSECT_HPP
#define INTWIST_INTERSECT_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "linalg.hpp"
#include "residue.hpp"

namespace intwist {

struct ReductionStats {
    int infinity_steps = 0;
    int finite_steps = 0;

    ReductionStats& operator+=(const ReductionStats& o) {
        infinity_steps += o.infinity_steps;
        finite_steps += o.finite_steps;
        return *this;
    }
};

// Apply the gauge transformation phi_j -> phi_j + d f_j + Om_{jk} f_k.
inline VecRF gauge_transform(const VecRF& phi, const VecRF& f, const MatRF& Om,
                             const std::string& var) {
    VecRF out = phi;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        out[j] += f[j].derivative(var);
        for (std::size_t k = 0; k < phi.size(); ++k) out[j] += Om[j][k] * f[k];
    }
    return out;
}

namespace detail {

// Coefficient of var^k in the polynomial part of f.
inline RatFunc polypart_coeff(const RatFunc& f, int var, int k) {
    UniView v = uni_view(f, var);
    UniPoly p = divmod(v.num, v.den).first;
    return p.coeff(k);
}

// Numerator of the q^o slot in the partial fraction decomposition of f
// (a polynomial of degree < deg q): the residue class of f*q^o modulo q.
// Handles squarefree but reducible q whose irreducible pieces appear with
// different multiplicities. Throws if f has a pole of order > o on q.
inline UniPoly qpow_slot(const RatFunc& f, const UniPoly& q, int o, int var) {
    RatFunc h = f * q.to_ratfunc().pow(o);
    UniView v = uni_view(h, var);
    UniPoly n = divmod(v.num, q).second;
    UniPoly r = divmod(v.den, q).second;
    // r not invertible mod q would mean a pole of order above o.
    return divmod(n * polynomial_inverse(r, q), q).second;
}

}  // namespace detail

// One reduction step for a pole of order o > 1 at infinity: gauge seed
// f_j = c_j var^{o-1}, coefficients fixed by cancelling the var^{o-2} term
// of the polynomial part. Returns false when no such pole exists.
inline bool reduce_pole_infinity(VecRF& phi, const MatRF& Om, int var,
                                 ReductionStats* stats = nullptr) {
    const RegistryPtr& reg = phi[0].registry();
    const std::string& name = reg->name(static_cast<std::size_t>(var));
    std::size_t nu = phi.size();

    int o = 0;
    for (const auto& p : phi) o = std::max(o, infinity_form_order(pole_data(p, var)));
    if (o <= 1) return false;

    RatFunc zpow = RatFunc(MultiPoly::variable(reg, name)).pow(o - 1);
    MatRF A(nu, VecRF(nu, RatFunc(reg)));
    VecRF rhs(nu, RatFunc(reg));
    for (std::size_t j = 0; j < nu; ++j) {
        for (std::size_t k = 0; k < nu; ++k) {
            A[j][k] = detail::polypart_coeff(Om[j][k] * zpow, var, o - 2);
            if (j == k) A[j][k] += RatFunc::constant(reg, Rat(o - 1));
        }
        rhs[j] = -detail::polypart_coeff(phi[j], var, o - 2);
    }
    VecRF c;
    try {
        c = solve_exact(A, rhs);
    } catch (const SingularSystem&) {
        throw GenericityError("pole reduction at infinity: singular system "
                              "(non-generic exponents)");
    }
    VecRF f(nu, RatFunc(reg));
    for (std::size_t k = 0; k < nu; ++k) f[k] = c[k] * zpow;
    phi = gauge_transform(phi, f, Om, name);
    if (stats) ++stats->infinity_steps;
    return true;
}

// One reduction step for the worst finite pole: pick the squarefree factor q
// with the highest multiplicity o > 1 in the combined denominator, gauge
// with f_j = (sum_m c_{j,m} var^m)/q^{o-1} and cancel the whole q^o slot.
inline bool reduce_pole_finite(VecRF& phi, const MatRF& Om, int var,
                               ReductionStats* stats = nullptr) {
    const RegistryPtr& reg = phi[0].registry();
    const std::string& name = reg->name(static_cast<std::size_t>(var));
    std::size_t nu = phi.size();

    MultiPoly den_lcm = MultiPoly::constant(reg, 1);
    for (const auto& p : phi) den_lcm = lcm_poly(den_lcm, p.den());
    std::optional<UniPoly> q;
    int o = 1;
    for (auto& [factor, mult] : squarefree_factor(UniPoly::from_poly(den_lcm, var)))
        if (mult > o) {
            o = mult;
            q = factor;
        }
    if (!q) return false;

    int dq = q->deg();
    RatFunc qr = q->to_ratfunc();
    std::size_t dim = nu * static_cast<std::size_t>(dq);
    MatRF A(dim, VecRF(dim, RatFunc(reg)));
    VecRF rhs(dim, RatFunc(reg));

    auto slot_rows = [&](const VecRF& psi, auto&& sink) {
        for (std::size_t j = 0; j < nu; ++j) {
            UniPoly s = detail::qpow_slot(psi[j], *q, o, var);
            for (int m = 0; m < dq; ++m)
                sink(j * static_cast<std::size_t>(dq) + static_cast<std::size_t>(m),
                     s.coeff(m));
        }
    };

    slot_rows(phi, [&](std::size_t row, const RatFunc& v) { rhs[row] = -v; });
    VecRF zero(nu, RatFunc(reg));
    for (std::size_t k = 0; k < nu; ++k) {
        for (int m = 0; m < dq; ++m) {
            VecRF f = zero;
            f[k] = RatFunc(MultiPoly::variable(reg, name)).pow(m) / qr.pow(o - 1);
            VecRF contrib = gauge_transform(zero, f, Om, name);
            std::size_t col = k * static_cast<std::size_t>(dq) + static_cast<std::size_t>(m);
            slot_rows(contrib, [&](std::size_t row, const RatFunc& v) { A[row][col] = v; });
        }
    }

    VecRF c;
    try {
        c = solve_exact(A, rhs);
    } catch (const SingularSystem&) {
        throw GenericityError("pole reduction at a finite point: singular system "
                              "(non-generic exponents)");
    }
    VecRF f(nu, RatFunc(reg));
    for (std::size_t k = 0; k < nu; ++k) {
        for (int m = 0; m < dq; ++m) {
            const RatFunc& ck = c[k * static_cast<std::size_t>(dq) + static_cast<std::size_t>(m)];
            f[k] += ck * RatFunc(MultiPoly::variable(reg, name)).pow(m);
        }
        f[k] /= qr.pow(o - 1);
    }
    phi = gauge_transform(phi, f, Om, name);
    if (stats) ++stats->finite_steps;
    return true;
}

// Full reduction to simple poles. Finite poles first (their seeds decay at
// infinity), then the pole at infinity (its seeds add only simple finite
// poles through Om).
inline VecRF reduce_to_simple_poles(VecRF phi, const MatRF& Om, int var,
                                    int max_passes = 64,
                                    ReductionStats* stats = nullptr) {
    for (int pass = 0; pass < max_passes; ++pass) {
        if (reduce_pole_finite(phi, Om, var, stats)) continue;
        if (reduce_pole_infinity(phi, Om, var, stats)) continue;
        return phi;
    }
    throw ReductionLimitExceeded("pole reduction did not terminate within the pass limit");
}

// Univariate generalised intersection number of two coefficient vectors
// with connection Om in the given variable. Both vectors are reduced to
// simple poles, then the result is the global residue over the critical
// points det(Om) = 0.
inline RatFunc univariate_intersection(VecRF phiL, VecRF phiR, const MatRF& Om,
                                       int var, int max_passes = 64,
                                       ReductionStats* stats = nullptr) {
    RegistryPtr reg = phiL[0].registry();
    phiL = reduce_to_simple_poles(std::move(phiL), mat_transpose(Om), var,
                                  max_passes, stats);
    phiR = reduce_to_simple_poles(std::move(phiR), mat_neg(Om), var,
                                  max_passes, stats);

    RatFunc det = det_exact(Om);
    if (det.is_zero())
        throw DegenerateFibration("connection matrix has vanishing determinant");
    // det = P/Q with P and Q taken from the same reduced fraction.
    UniPoly P = UniPoly::from_poly(det.num(), var);
    RatFunc Q = RatFunc(det.den());

    MatRF adj = adjugate_exact(Om);
    RatFunc s(reg);
    for (std::size_t i = 0; i < phiL.size(); ++i)
        for (std::size_t j = 0; j < phiR.size(); ++j)
            s += phiL[i] * adj[i][j] * phiR[j];
    return -global_residue(Q * s, P);
}

struct PlanOptions {
    // Per inner level (index i-1 for level i, 1 <= i <= n-1): basis of the
    // fibre cohomology and candidates for the dual basis. Empty = standard
    // monomials of the critical point ideal.
    std::vector<std::vector<RatFunc>> basis_override;
    std::vector<std::vector<RatFunc>> dual_candidates;
    bool check_assumptions = true;
    int max_reduction_passes = 64;
};

// Precomputed fibration data for one variable order: per-level bases, dual
// bases, connection matrices and cohomology dimensions. Intersection
// numbers are evaluated recursively against this plan.
class FibrationPlan {
public:
    FibrationPlan(Twist twist, std::vector<std::string> order, PlanOptions opt = {})
        : twist_(std::move(twist)), opt_(std::move(opt)) {
        const RegistryPtr& reg = twist_.registry();
        for (const auto& name : order) {
            int v = reg->require(name);
            if (!reg->is_z(static_cast<std::size_t>(v)))
                throw Error("order entry is not an integration variable: " + name);
            vars_.push_back(v);
        }
        n_ = vars_.size();
        dims_.assign(n_ + 1, 1);
        basis_.resize(n_);
        dual_.resize(n_);
        omega_.resize(n_ + 1);
        basis_[0] = {RatFunc::constant(reg, 1)};
        dual_[0] = {RatFunc::constant(reg, 1)};
        level_stats_.assign(n_ + 1, ReductionStats{});
        for (std::size_t i = 1; i <= n_; ++i) build_level(i);
    }

    const Twist& twist() const { return twist_; }
    const RegistryPtr& registry() const { return twist_.registry(); }
    std::size_t levels() const { return n_; }
    int level_var(std::size_t i) const { return vars_[i - 1]; }
    std::size_t dim(std::size_t i) const { return dims_[i]; }
    const MatRF& omega(std::size_t i) const { return omega_[i]; }
    const std::vector<RatFunc>& basis(std::size_t i) const { return basis_[i]; }
    const std::vector<RatFunc>& dual(std::size_t i) const { return dual_[i]; }
    const ReductionStats& stats() const { return stats_; }
    const std::vector<ReductionStats>& level_stats() const { return level_stats_; }

    // Coefficients of phiL against the dual basis of level i-1 (functions
    // of the variables above level i-1).
    VecRF expand_left(std::size_t i, const RatFunc& phiL) {
        VecRF out;
        for (std::size_t j = 0; j < dims_[i - 1]; ++j)
            out.push_back(pairing(i - 1, phiL, dual_[i - 1][j]));
        return out;
    }

    VecRF expand_right(std::size_t i, const RatFunc& phiR) {
        VecRF out;
        for (std::size_t j = 0; j < dims_[i - 1]; ++j)
            out.push_back(pairing(i - 1, basis_[i - 1][j], phiR));
        return out;
    }

    // i-fold intersection number of scalar cocycle functions of the first
    // i order variables.
    RatFunc pairing(std::size_t i, const RatFunc& phiL, const RatFunc& phiR) {
        if (i == 0) return phiL * phiR;
        std::string key = std::to_string(i) + '\x1f' + phiL.to_string() + '\x1f' +
                          phiR.to_string();
        {
            std::lock_guard<std::mutex> lock(memo_mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        VecRF L = expand_left(i, phiL);
        VecRF R = expand_right(i, phiR);
        ReductionStats local;
        RatFunc result = univariate_intersection(std::move(L), std::move(R),
                                                 omega_[i], vars_[i - 1],
                                                 opt_.max_reduction_passes, &local);
        std::lock_guard<std::mutex> lock(memo_mutex_);
        stats_ += local;
        level_stats_[i] += local;
        memo_.emplace(std::move(key), result);
        return result;
    }

    RatFunc intersection_number(const RatFunc& phiL, const RatFunc& phiR) {
        return pairing(n_, phiL, phiR);
    }

    MatRF intersection_matrix(const std::vector<RatFunc>& Ls,
                              const std::vector<RatFunc>& Rs) {
        MatRF m(Ls.size(), VecRF(Rs.size(), RatFunc(registry())));
        for (std::size_t i = 0; i < Ls.size(); ++i)
            for (std::size_t j = 0; j < Rs.size(); ++j)
                m[i][j] = pairing(n_, Ls[i], Rs[j]);
        return m;
    }

private:
    void build_level(std::size_t i) {
        const RegistryPtr& reg = registry();
        int v = vars_[i - 1];
        const std::string& vname = reg->name(static_cast<std::size_t>(v));
        RatFunc omega_v = twist_.omega_component(v);

        // Connection matrix from the level i-1 basis and dual basis.
        std::size_t nu_prev = dims_[i - 1];
        MatRF Om(nu_prev, VecRF(nu_prev, RatFunc(reg)));
        for (std::size_t j = 0; j < nu_prev; ++j) {
            RatFunc covariant = basis_[i - 1][j].derivative(vname) +
                                omega_v * basis_[i - 1][j];
            for (std::size_t k = 0; k < nu_prev; ++k)
                Om[j][k] = pairing(i - 1, covariant, dual_[i - 1][k]);
        }
        if (opt_.check_assumptions)
            for (const auto& row : Om)
                for (const auto& entry : row)
                    if (!is_simple_form(entry, v))
                        throw HigherPoleConnection(
                            "connection matrix entry with a higher pole in " + vname);

        std::vector<int> active(vars_.begin(), vars_.begin() + static_cast<long>(i));
        CohomologyInfo info = cohomology_data(twist_, active);
        dims_[i] = info.dim;
        omega_[i] = Om;

        if (opt_.check_assumptions) {
            RatFunc det = det_exact(Om);
            int degp = det.is_zero() ? -1 : det.num().degree_in(v);
            if (degp != static_cast<int>(info.dim)) {
                std::string hint;
                if (n_ >= 2)
                    hint = "rotate " + reg->name(static_cast<std::size_t>(vars_[0])) +
                           " " + reg->name(static_cast<std::size_t>(vars_[1])) + " 1 2";
                throw DegenerateFibration(
                    "determinant of the level-" + std::to_string(i) +
                        " connection has " + std::to_string(std::max(degp, 0)) +
                        " critical points in " + vname + ", expected " +
                        std::to_string(info.dim),
                    hint);
            }
        }

        if (i == n_) return;

        std::vector<RatFunc> e, h;
        if (i <= opt_.basis_override.size() && !opt_.basis_override[i - 1].empty())
            e = opt_.basis_override[i - 1];
        else
            e = monomial_basis(reg, active, info.monomials);
        if (i <= opt_.dual_candidates.size() && !opt_.dual_candidates[i - 1].empty())
            h = opt_.dual_candidates[i - 1];
        else
            h = e;
        if (e.size() != info.dim || h.size() != info.dim)
            throw Error("basis size does not match the cohomology dimension at level " +
                        std::to_string(i));

        MatRF C(info.dim, VecRF(info.dim, RatFunc(reg)));
        for (std::size_t j = 0; j < info.dim; ++j)
            for (std::size_t k = 0; k < info.dim; ++k)
                C[j][k] = pairing(i, e[j], h[k]);
        MatRF Cinv;
        try {
            Cinv = inverse_exact(C);
        } catch (const SingularSystem&) {
            throw SingularCMatrix("intersection matrix of the level-" +
                                  std::to_string(i) + " basis candidates is singular");
        }
        std::vector<RatFunc> d(info.dim, RatFunc(reg));
        for (std::size_t j = 0; j < info.dim; ++j)
            for (std::size_t k = 0; k < info.dim; ++k)
                d[j] += h[k] * Cinv[k][j];
        basis_[i] = std::move(e);
        dual_[i] = std::move(d);
    }

    Twist twist_;
    PlanOptions opt_;
    std::vector<int> vars_;
    std::size_t n_ = 0;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<RatFunc>> basis_;
    std::vector<std::vector<RatFunc>> dual_;
    std::vector<MatRF> omega_;
    ReductionStats stats_;
    std::vector<ReductionStats> level_stats_;
    std::map<std::string, RatFunc> memo_;
    std::mutex memo_mutex_;
};

inline const MatRF& connection_matrix(const FibrationPlan& plan, std::size_t level) {
    return plan.omega(level);
}

inline std::vector<RatFunc> dual_basis(const FibrationPlan& plan, std::size_t level) {
    return plan.dual(level);
}

inline RatFunc intersection_number(FibrationPlan& plan, const RatFunc& phiL,
                                   const RatFunc& phiR) {
    return plan.intersection_number(phiL, phiR);
}

}  // namespace intwist

#endif
