#ifndef INTWIST_RATFUNC_HPP
#define INTWIST_RATFUNC_HPP

#include <map>
#include <string>
#include <utility>

#include "multipoly.hpp"

namespace intwist {

// Rational function num/den in normal form: gcd(num, den) = 1, den has
// rational content 1 and positive leading coefficient (grlex). The zero
// element is 0/1.
class RatFunc {
public:
    explicit RatFunc(RegistryPtr reg)
        : num_(MultiPoly(reg)), den_(MultiPoly::constant(reg, 1)) {}

    RatFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
        check_same_registry(num_.registry(), den_.registry());
        normalize();
    }

    explicit RatFunc(MultiPoly num)
        : num_(std::move(num)), den_(MultiPoly::constant(num_.registry(), 1)) {
        normalize_scalar();
    }

    static RatFunc constant(RegistryPtr reg, const Rat& c) {
        return RatFunc(MultiPoly::constant(std::move(reg), c));
    }
    static RatFunc variable(RegistryPtr reg, const std::string& name) {
        return RatFunc(MultiPoly::variable(std::move(reg), name));
    }

    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const RegistryPtr& registry() const { return num_.registry(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rat constant_value() const { return num_.constant_value() / den_.constant_value(); }
    bool is_polynomial() const { return den_.is_constant(); }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc operator-() const { return RatFunc(-num_, den_, already_normal{}); }

    // Sums and products reduce with gcds of the stored (already reduced)
    // parts instead of one gcd of the full cross products, which keeps the
    // polynomial gcd calls small.
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return add_impl(a, b, false);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return add_impl(a, b, true);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        check_same_registry(a.registry(), b.registry());
        if (a.is_zero() || b.is_zero()) return RatFunc(a.registry());
        MultiPoly g1 = gcd_poly(a.num_, b.den_);
        MultiPoly g2 = gcd_poly(b.num_, a.den_);
        RatFunc r(a.num_.divide_exact(g1) * b.num_.divide_exact(g2),
                  a.den_.divide_exact(g2) * b.den_.divide_exact(g1),
                  already_normal{});
        r.normalize_scalar();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw ZeroDenominator("division by zero rational function");
        return a * b.inverse();
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc operator*(const Rat& s) const {
        RatFunc r(num_ * s, den_, already_normal{});
        r.normalize_scalar();
        return r;
    }

    RatFunc inverse() const {
        if (is_zero()) throw ZeroDenominator("inverse of zero rational function");
        RatFunc r(den_, num_, already_normal{});  // still coprime, fix the unit
        r.normalize_scalar();
        return r;
    }

    RatFunc pow(int n) const {
        if (n < 0) return inverse().pow(-n);
        RatFunc r(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)),
                  already_normal{});
        return r;
    }

    // d/dvar via the quotient rule, n'/d - (n/d)(d'/d), so each step reduces
    // against the small stored parts.
    RatFunc derivative(const std::string& var) const {
        RatFunc np(num_.derivative(var));
        if (den_.is_constant()) return np;  // normal form keeps it at 1
        MultiPoly dp = den_.derivative(var);
        return (np - *this * RatFunc(dp)) / RatFunc(den_);
    }

    RatFunc substitute(const std::map<std::string, MultiPoly>& bindings) const {
        return RatFunc(num_.substitute(bindings), den_.substitute(bindings));
    }

    // Canonical display form: "(num)/(den)", or just the numerator string
    // when the denominator is 1.
    std::string to_string() const {
        if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string();
        return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
    }

private:
    struct already_normal {};
    RatFunc(MultiPoly num, MultiPoly den, already_normal)
        : num_(std::move(num)), den_(std::move(den)) {}

    static RatFunc add_impl(const RatFunc& a, const RatFunc& b, bool sub) {
        check_same_registry(a.registry(), b.registry());
        if (a.is_zero()) return sub ? -b : b;
        if (b.is_zero()) return a;
        MultiPoly d = gcd_poly(a.den_, b.den_);
        if (d.is_constant()) {
            // Coprime denominators: the sum is already reduced.
            MultiPoly cross = b.num_ * a.den_;
            MultiPoly num = a.num_ * b.den_ + (sub ? -cross : cross);
            if (num.is_zero()) return RatFunc(a.registry());
            RatFunc r(std::move(num), a.den_ * b.den_, already_normal{});
            r.normalize_scalar();
            return r;
        }
        MultiPoly da = a.den_.divide_exact(d), db = b.den_.divide_exact(d);
        MultiPoly cross = b.num_ * da;
        MultiPoly t = a.num_ * db + (sub ? -cross : cross);
        if (t.is_zero()) return RatFunc(a.registry());
        // Any factor shared between t and the full denominator divides d.
        MultiPoly g = gcd_poly(t, d);
        RatFunc r(t.divide_exact(g), da * b.den_.divide_exact(g), already_normal{});
        r.normalize_scalar();
        return r;
    }

    void normalize() {
        if (den_.is_zero()) throw ZeroDenominator("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = MultiPoly::constant(registry(), 1);
            return;
        }
        if (!den_.is_constant()) {
            MultiPoly g = gcd_poly(num_, den_);
            if (!g.is_constant()) {
                num_ = num_.divide_exact(g);
                den_ = den_.divide_exact(g);
            }
        }
        normalize_scalar();
    }

    // Scale so the denominator is content-1 with positive leading coefficient.
    void normalize_scalar() {
        if (den_.is_constant()) {
            Rat c = den_.constant_value();
            num_ = num_ / c;
            den_ = MultiPoly::constant(registry(), 1);
            return;
        }
        Rat c = den_.content();
        if (den_.leading_coeff() < 0) c = -c;
        if (c != 1) {
            den_ = den_ / c;
            num_ = num_ / c;
        }
    }

    MultiPoly num_;
    MultiPoly den_;
};

inline RatFunc operator*(const Rat& s, const RatFunc& f) { return f * s; }

}  // namespace intwist

#endif
