#ifndef INTWIST_JOB_HPP
#define INTWIST_JOB_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "feynman.hpp"
#include "intersect.hpp"
#include "oracle.hpp"

namespace intwist {

// Declarative problem description, line-oriented with '#' comments:
//
//   vars <name>...            params <name>...
//   twist (<poly>)^(<affine>)           one line per factor
//   left <expr>               right <expr>
//   order <name>...
//   basis <level>: <expr>, ...          dualcand <level>: <expr>, ...
//
// Feynman extensions (Baikov maximal cut):
//
//   loops <label>...          dot <a> <b> = <expr>
//   prop <i> = sq(<momentum sum>) [+ <mass expr>]
//   cut <name>...             auxexp <affine>
//   rotate <v1> <v2> <c> <s>
//   target <expr>             master <expr>[, <expr>...]
//
// Expression fields are kept verbatim so that serialization round-trips.
struct Job {
    struct Dot {
        std::string a, b, expr;
        bool operator==(const Dot& o) const {
            return a == o.a && b == o.b && expr == o.expr;
        }
    };
    struct Rotation {
        std::string v1, v2;
        Rat c{1}, s{2};
        bool operator==(const Rotation& o) const {
            return v1 == o.v1 && v2 == o.v2 && c == o.c && s == o.s;
        }
    };

    std::vector<std::string> vars, params;
    std::vector<std::pair<std::string, std::string>> twist_factors;
    std::string left, right;  // empty = default
    std::vector<std::string> order;
    std::map<std::size_t, std::vector<std::string>> basis, dualcand;

    std::vector<std::string> loops;
    std::vector<Dot> dots;
    std::map<std::size_t, std::string> props;  // 1-based index -> rhs text
    std::vector<std::string> cut;
    std::string auxexp;
    std::optional<Rotation> rotate;
    std::string target;
    std::vector<std::string> masters;

    bool feynman() const { return !loops.empty(); }

    bool operator==(const Job& o) const {
        return vars == o.vars && params == o.params &&
               twist_factors == o.twist_factors && left == o.left &&
               right == o.right && order == o.order && basis == o.basis &&
               dualcand == o.dualcand && loops == o.loops && dots == o.dots &&
               props == o.props && cut == o.cut && auxexp == o.auxexp &&
               rotate == o.rotate && target == o.target && masters == o.masters;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

// Split on top-level commas (not inside parentheses).
inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

inline Rat parse_rat_token(const std::string& t, int line, int col) {
    try {
        Rat r(t);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("expected a rational number, got '" + t + "'", line, col);
    }
}

// "(poly)^(affine)" -> the two inner texts, with column tracking.
inline std::pair<std::string, std::string> split_twist(const std::string& s,
                                                       int line, int col0) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto fail = [&](const std::string& m) -> void {
        throw ParseError(m, line, col0 + static_cast<int>(i));
    };
    auto balanced = [&]() -> std::string {
        skip();
        if (i >= s.size() || s[i] != '(') fail("expected '('");
        int depth = 0;
        std::size_t start = ++i;
        for (; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') {
                if (depth == 0) return s.substr(start, i++ - start);
                --depth;
            }
        }
        fail("unbalanced '('");
        return {};
    };
    std::string poly = balanced();
    skip();
    if (i >= s.size() || s[i] != '^') fail("expected '^'");
    ++i;
    std::string expo = balanced();
    skip();
    if (i != s.size()) fail("unexpected trailing input");
    return {poly, expo};
}

}  // namespace detail

inline Job parse_job(const std::string& text) {
    Job job;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto expr_tail = [&](const std::string& line, std::size_t from) {
        // keep the original column positions for parser diagnostics
        return std::string(from, ' ') + line.substr(from);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (detail::trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        std::size_t after = line.find(kw) + kw.size();
        std::string rest = detail::trim(line.substr(after));
        int restcol = static_cast<int>(line.find_first_not_of(" \t", after)) + 1;
        if (rest.empty() && kw != "left" && kw != "right")
            throw ParseError("missing argument for '" + kw + "'", lineno, restcol);

        if (kw == "vars") {
            auto v = detail::split_ws(rest);
            job.vars.insert(job.vars.end(), v.begin(), v.end());
        } else if (kw == "params") {
            auto v = detail::split_ws(rest);
            job.params.insert(job.params.end(), v.begin(), v.end());
        } else if (kw == "twist") {
            job.twist_factors.push_back(
                detail::split_twist(rest, lineno, restcol));
        } else if (kw == "left") {
            job.left = rest;
        } else if (kw == "right") {
            job.right = rest;
        } else if (kw == "order") {
            job.order = detail::split_ws(rest);
        } else if (kw == "basis" || kw == "dualcand") {
            std::size_t colon = rest.find(':');
            if (colon == std::string::npos)
                throw ParseError("expected '<level>:' after '" + kw + "'",
                                 lineno, restcol);
            std::size_t level;
            try {
                level = std::stoul(detail::trim(rest.substr(0, colon)));
            } catch (const std::exception&) {
                throw ParseError("bad level number", lineno, restcol);
            }
            auto& dst = kw == "basis" ? job.basis : job.dualcand;
            dst[level] = detail::split_commas(rest.substr(colon + 1));
        } else if (kw == "loops") {
            job.loops = detail::split_ws(rest);
        } else if (kw == "dot") {
            std::size_t eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected '=' in dot line", lineno, restcol);
            auto names = detail::split_ws(rest.substr(0, eq));
            if (names.size() != 2)
                throw ParseError("expected 'dot <a> <b> = <expr>'", lineno, restcol);
            job.dots.push_back(
                {names[0], names[1], detail::trim(rest.substr(eq + 1))});
        } else if (kw == "prop") {
            std::size_t eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected '=' in prop line", lineno, restcol);
            std::size_t idx;
            try {
                idx = std::stoul(detail::trim(rest.substr(0, eq)));
            } catch (const std::exception&) {
                throw ParseError("bad propagator index", lineno, restcol);
            }
            job.props[idx] = detail::trim(rest.substr(eq + 1));
        } else if (kw == "cut") {
            job.cut = detail::split_ws(rest);
        } else if (kw == "auxexp") {
            job.auxexp = rest;
        } else if (kw == "rotate") {
            auto v = detail::split_ws(rest);
            if (v.size() != 4)
                throw ParseError("expected 'rotate <v1> <v2> <c> <s>'", lineno,
                                 restcol);
            Job::Rotation r;
            r.v1 = v[0];
            r.v2 = v[1];
            r.c = detail::parse_rat_token(v[2], lineno, restcol);
            r.s = detail::parse_rat_token(v[3], lineno, restcol);
            job.rotate = r;
        } else if (kw == "target") {
            job.target = rest;
        } else if (kw == "master") {
            job.masters = detail::split_commas(rest);
        } else {
            throw ParseError("unknown keyword '" + kw + "'", lineno, 1);
        }

        // validate expression syntax early, with job-file coordinates
        if (kw == "left" || kw == "right" || kw == "target") {
            if (!rest.empty()) {
                auto reg = make_registry(job.vars, job.params);
                parse_ratfunc(reg, expr_tail(line, after), lineno);
            }
        }
    }
    if (job.vars.empty()) throw ParseError("no vars declared", 1, 1);
    if (!job.feynman() && job.twist_factors.empty())
        throw ParseError("no twist declared", 1, 1);
    return job;
}

inline std::string serialize_job(const Job& job) {
    std::ostringstream out;
    auto words = [&](const std::string& kw, const std::vector<std::string>& v) {
        if (v.empty()) return;
        out << kw;
        for (const auto& w : v) out << ' ' << w;
        out << '\n';
    };
    words("vars", job.vars);
    words("params", job.params);
    for (const auto& [p, e] : job.twist_factors)
        out << "twist (" << p << ")^(" << e << ")\n";
    if (!job.left.empty()) out << "left " << job.left << '\n';
    if (!job.right.empty()) out << "right " << job.right << '\n';
    words("order", job.order);
    auto levels = [&](const std::string& kw,
                      const std::map<std::size_t, std::vector<std::string>>& m) {
        for (const auto& [lvl, exprs] : m) {
            out << kw << ' ' << lvl << ':';
            for (std::size_t i = 0; i < exprs.size(); ++i)
                out << (i ? ", " : " ") << exprs[i];
            out << '\n';
        }
    };
    levels("basis", job.basis);
    levels("dualcand", job.dualcand);
    words("loops", job.loops);
    for (const auto& d : job.dots)
        out << "dot " << d.a << ' ' << d.b << " = " << d.expr << '\n';
    for (const auto& [i, rhs] : job.props)
        out << "prop " << i << " = " << rhs << '\n';
    words("cut", job.cut);
    if (!job.auxexp.empty()) out << "auxexp " << job.auxexp << '\n';
    if (job.rotate)
        out << "rotate " << job.rotate->v1 << ' ' << job.rotate->v2 << ' '
            << job.rotate->c.get_str() << ' ' << job.rotate->s.get_str() << '\n';
    if (!job.target.empty()) out << "target " << job.target << '\n';
    if (!job.masters.empty()) {
        out << "master ";
        for (std::size_t i = 0; i < job.masters.size(); ++i)
            out << (i ? ", " : "") << job.masters[i];
        out << '\n';
    }
    return out.str();
}

namespace detail {

// "sq(k1 - p + 2*k2)" momentum combination.
inline MomLin parse_momentum(const std::string& s, int line) {
    MomLin m;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    Rat sign(1);
    bool first = true;
    while (true) {
        skip();
        if (i >= s.size()) {
            if (first) throw ParseError("empty momentum", line, 1);
            break;
        }
        if (!first) {
            if (s[i] == '+') sign = Rat(1);
            else if (s[i] == '-') sign = Rat(-1);
            else throw ParseError("expected '+' or '-' in momentum", line,
                                  static_cast<int>(i) + 1);
            ++i;
            skip();
        } else if (s[i] == '-') {
            sign = Rat(-1);
            ++i;
            skip();
        }
        Rat coef = sign;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            std::size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            coef *= Rat(s.substr(start, i - start));
            skip();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip();
            }
        }
        std::size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                                s[i] == '_'))
            ++i;
        if (i == start)
            throw ParseError("expected a momentum label", line,
                             static_cast<int>(i) + 1);
        m[s.substr(start, i - start)] += coef;
        first = false;
    }
    return m;
}

// "sq(<momentum>) [+- <mass expr>]" -> PropSpec.
inline PropSpec parse_prop(const RegistryPtr& reg, const std::string& rhs, int line) {
    std::size_t sq = rhs.find("sq");
    if (sq == std::string::npos || trim(rhs.substr(0, sq)) != "")
        throw ParseError("propagator must start with sq(...)", line, 1);
    std::size_t open = rhs.find('(', sq);
    if (open == std::string::npos)
        throw ParseError("expected '(' after sq", line, static_cast<int>(sq) + 3);
    int depth = 0;
    std::size_t close = open;
    for (std::size_t i = open; i < rhs.size(); ++i) {
        if (rhs[i] == '(') ++depth;
        if (rhs[i] == ')' && --depth == 0) {
            close = i;
            break;
        }
    }
    if (close == open)
        throw ParseError("unbalanced '(' in sq", line, static_cast<int>(open) + 1);
    std::string tail = trim(rhs.substr(close + 1));
    return PropSpec{parse_momentum(rhs.substr(open + 1, close - open - 1), line),
                    tail.empty() ? RatFunc(reg)
                                 : parse_ratfunc(reg, "0" + tail, line)};
}

}  // namespace detail

struct RunOptions {
    std::vector<std::string> order_override;
    bool check_assumptions = true;
    int oracle_samples = 0;
    unsigned seed = 1;
    double tolerance = 1e-8;
    bool want_trace = false;
};

struct RunReport {
    std::string result;                 // canonical exact string
    std::vector<std::string> order;
    std::vector<std::size_t> dims;      // nu_i, level 1..n
    std::vector<int> reductions;        // reduction passes per level
    std::vector<OracleRecord> oracle;
    std::vector<std::string> trace;
};

namespace detail {

inline void fill_trace(FibrationPlan& plan, RunReport& rep, bool want_trace) {
    const RegistryPtr& reg = plan.registry();
    for (std::size_t i = 1; i <= plan.levels(); ++i) {
        rep.dims.push_back(plan.dim(i));
        const ReductionStats& st = plan.level_stats()[i];
        rep.reductions.push_back(st.infinity_steps + st.finite_steps);
        if (want_trace) {
            int v = plan.level_var(i);
            RatFunc det = det_exact(plan.omega(i));
            std::ostringstream t;
            t << "level " << i << ": var=" << reg->name(static_cast<std::size_t>(v))
              << " nu=" << plan.dim(i)
              << " det_num_deg=" << (det.is_zero() ? -1 : det.num().degree_in(v))
              << " det_den_deg=" << (det.is_zero() ? -1 : det.den().degree_in(v))
              << " passes_inf=" << st.infinity_steps
              << " passes_fin=" << st.finite_steps;
            rep.trace.push_back(t.str());
        }
    }
}

// Reduced top-level coefficient vectors, as shown in a verbose trace.
inline void trace_reduced_forms(FibrationPlan& plan, const RatFunc& phiL,
                                const RatFunc& phiR, RunReport& rep) {
    std::size_t n = plan.levels();
    VecRF L = plan.expand_left(n, phiL);
    VecRF R = plan.expand_right(n, phiR);
    const MatRF& Om = plan.omega(n);
    int v = plan.level_var(n);
    L = reduce_to_simple_poles(std::move(L), mat_transpose(Om), v);
    R = reduce_to_simple_poles(std::move(R), mat_neg(Om), v);
    auto join = [](const VecRF& vec) {
        std::string s;
        for (std::size_t i = 0; i < vec.size(); ++i)
            s += (i ? ", " : "") + vec[i].to_string();
        return s;
    };
    rep.trace.push_back("reduced left: " + join(L));
    rep.trace.push_back("reduced right: " + join(R));
}

// Numeric check of a reduction coefficient vector: solve the sampled linear
// system M = c C for c and compare against the exact coefficient.
inline std::vector<OracleRecord> oracle_check_reduction(
    FibrationPlan& plan, const RatFunc& target, const std::vector<RatFunc>& masters,
    const std::vector<RatFunc>& exact, const std::vector<std::string>& params,
    int nsamples, unsigned seed, double tol) {
    std::vector<OracleRecord> out;
    std::size_t m = masters.size();
    for (int s = 0; s < nsamples; ++s) {
        for (unsigned attempt = 0;; ++attempt) {
            NumericSample sample = make_sample(plan.twist(), params,
                                               seed + 1000003u * static_cast<unsigned>(s) + attempt,
                                               tol);
            try {
                std::vector<CFloat> Mrow(m);
                std::vector<std::vector<CFloat>> C(m, std::vector<CFloat>(m));
                for (std::size_t k = 0; k < m; ++k) {
                    Mrow[k] = numeric_intersection(plan, target, masters[k], sample);
                    for (std::size_t j = 0; j < m; ++j)
                        C[j][k] = numeric_intersection(plan, masters[j], masters[k], sample);
                }
                // solve c C = M by Gaussian elimination on C^T c^T = M^T
                std::vector<std::vector<CFloat>> a(m, std::vector<CFloat>(m + 1));
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = 0; j < m; ++j) a[i][j] = C[j][i];
                    a[i][m] = Mrow[i];
                }
                for (std::size_t col = 0; col < m; ++col) {
                    std::size_t piv = col;
                    for (std::size_t r = col + 1; r < m; ++r)
                        if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
                    std::swap(a[col], a[piv]);
                    for (std::size_t r = 0; r < m; ++r) {
                        if (r == col) continue;
                        CFloat f = a[r][col] / a[col][col];
                        for (std::size_t cc = col; cc <= m; ++cc)
                            a[r][cc] -= f * a[col][cc];
                    }
                }
                for (std::size_t j = 0; j < m; ++j) {
                    OracleRecord rec;
                    rec.sample = sample;
                    rec.numeric = a[j][m] / a[j][j];
                    rec.exact_at_sample = eval_ratfunc_rat(exact[j], sample.bindings);
                    RFloat ex = to_rfloat(rec.exact_at_sample);
                    RFloat scale = (std::max)(RFloat(1), abs(ex));
                    rec.rel_err =
                        (abs(rec.numeric - CFloat(ex)) / scale).convert_to<double>();
                    if (rec.rel_err > tol)
                        throw ToleranceExceeded("reduction oracle tolerance exceeded");
                    out.push_back(std::move(rec));
                }
                break;
            } catch (const RootClustering&) {
                if (attempt >= 4) throw;
            } catch (const ZeroDenominator&) {
                if (attempt >= 4) throw;
            }
        }
    }
    return out;
}

}  // namespace detail

inline RunReport run_job(const Job& job, const RunOptions& opt = {}) {
    RunReport rep;
    auto reg = make_registry(job.vars, job.params);

    // the twist and the effective cocycles
    Twist twist(reg);
    RatFunc left(reg), right(reg);
    std::vector<std::string> order =
        !opt.order_override.empty() ? opt.order_override : job.order;

    if (job.feynman()) {
        DotTable dots;
        for (const auto& d : job.dots)
            dots.set(d.a, d.b, parse_ratfunc(reg, d.expr));
        std::vector<std::string> externals;
        auto known = [&](const std::string& n) {
            for (const auto& l : job.loops)
                if (l == n) return true;
            for (const auto& e : externals)
                if (e == n) return true;
            return false;
        };
        for (const auto& d : job.dots) {
            if (!known(d.a)) externals.push_back(d.a);
            if (!known(d.b)) externals.push_back(d.b);
        }
        std::vector<PropSpec> props;
        for (std::size_t i = 1; i <= job.props.size(); ++i) {
            auto it = job.props.find(i);
            if (it == job.props.end())
                throw Error("propagator indices must be contiguous from 1");
            props.push_back(detail::parse_prop(reg, it->second, 1));
            for (const auto& [lbl, c] : props.back().momentum)
                if (!known(lbl)) externals.push_back(lbl);
        }
        BaikovSetup setup(reg, job.loops, externals, dots, props, job.vars);
        MultiPoly bcut = setup.cut(job.cut);
        if (job.auxexp.empty()) throw Error("feynman job needs an auxexp line");
        twist = maximal_cut_twist(bcut, parse_ratfunc(reg, job.auxexp));
        RatFunc def(MultiPoly::constant(reg, 1), bcut);
        left = job.left.empty() ? def : parse_ratfunc(reg, job.left);
        right = job.right.empty() ? def : parse_ratfunc(reg, job.right);
        if (order.empty())
            for (const auto& v : job.vars) {
                bool on_cut = false;
                for (const auto& c : job.cut) on_cut |= (c == v);
                if (!on_cut) order.push_back(v);
            }
    } else {
        for (const auto& [p, e] : job.twist_factors)
            twist.add_factor(parse_poly(reg, p), parse_ratfunc(reg, e));
        left = job.left.empty() ? RatFunc::constant(reg, 1)
                                : parse_ratfunc(reg, job.left);
        right = job.right.empty() ? RatFunc::constant(reg, 1)
                                  : parse_ratfunc(reg, job.right);
        if (order.empty()) order = job.vars;
    }

    if (job.rotate) {
        const auto& r = *job.rotate;
        twist = rotate_coordinates(twist, r.v1, r.v2, r.c, r.s);
        auto rot = rotation_map(reg, r.v1, r.v2, r.c, r.s);
        left = left.substitute(rot);
        right = right.substitute(rot);
    }

    // order sanity: distinct, declared integration variables
    for (const auto& v : order) {
        if (std::count(order.begin(), order.end(), v) != 1)
            throw Error("order repeats variable " + v);
        if (reg->find(v) < 0) throw UndeclaredName("order variable " + v);
    }

    PlanOptions popt;
    popt.check_assumptions = opt.check_assumptions;
    std::size_t max_level = 0;
    for (const auto& m : {job.basis, job.dualcand})
        for (const auto& [lvl, _] : m) max_level = (std::max)(max_level, lvl);
    popt.basis_override.resize(max_level);
    popt.dual_candidates.resize(max_level);
    for (const auto& [lvl, exprs] : job.basis)
        for (const auto& e : exprs)
            popt.basis_override[lvl - 1].push_back(parse_ratfunc(reg, e));
    for (const auto& [lvl, exprs] : job.dualcand)
        for (const auto& e : exprs)
            popt.dual_candidates[lvl - 1].push_back(parse_ratfunc(reg, e));

    FibrationPlan plan(twist, order, popt);
    rep.order = order;

    if (!job.target.empty()) {
        if (job.masters.empty()) throw Error("target requires a master line");
        RatFunc target = parse_ratfunc(reg, job.target);
        std::vector<RatFunc> masters;
        for (const auto& m : job.masters) masters.push_back(parse_ratfunc(reg, m));
        if (job.rotate) {
            auto rot = rotation_map(reg, job.rotate->v1, job.rotate->v2,
                                    job.rotate->c, job.rotate->s);
            target = target.substitute(rot);
            for (auto& m : masters) m = m.substitute(rot);
        }
        std::vector<RatFunc> coeffs;
        for (std::size_t j = 0; j < masters.size(); ++j)
            coeffs.push_back(reduction_coefficient(plan, target, masters, j));
        std::string res;
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            res += (j ? ", " : "") + coeffs[j].to_string();
        rep.result = res;
        if (opt.oracle_samples > 0)
            rep.oracle = detail::oracle_check_reduction(
                plan, target, masters, coeffs, job.params, opt.oracle_samples,
                opt.seed, opt.tolerance);
        detail::fill_trace(plan, rep, opt.want_trace);
        return rep;
    }

    RatFunc result = plan.intersection_number(left, right);
    rep.result = result.to_string();
    detail::fill_trace(plan, rep, opt.want_trace);
    if (opt.want_trace) detail::trace_reduced_forms(plan, left, right, rep);
    if (opt.oracle_samples > 0)
        rep.oracle = oracle_check(plan, left, right, result, job.params,
                                  opt.oracle_samples, opt.seed, opt.tolerance);
    return rep;
}

}  // namespace intwist

#endif
