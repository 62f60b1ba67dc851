#include <catch2/catch_amalgamated.hpp>

#include "intwist/expr.hpp"
#include "intwist/intersect.hpp"

using namespace intwist;

namespace {

// Univariate weight: u = (p1*p2)^g with p1 = z1 and p2 the 7th cyclotomic
// polynomial.
Twist cyclotomic_twist(const RegistryPtr& reg) {
    Twist t(reg);
    RatFunc g = RatFunc::variable(reg, "g");
    t.add_factor(parse_poly(reg, "z1"), g);
    t.add_factor(parse_poly(reg, "z1^6+z1^5+z1^4+z1^3+z1^2+z1+1"), g);
    return t;
}

// Elliptic curve weight: u = (z1*z2*p3)^g, p3 = z2^2 - 4 z1^3 + 11 z1 - 7.
Twist elliptic_twist(const RegistryPtr& reg) {
    Twist t(reg);
    RatFunc g = RatFunc::variable(reg, "g");
    t.add_factor(parse_poly(reg, "z1"), g);
    t.add_factor(parse_poly(reg, "z2"), g);
    t.add_factor(parse_poly(reg, "z2^2 - 4*z1^3 + 11*z1 - 7"), g);
    return t;
}

Twist negated(const Twist& t) {
    Twist n(t.registry());
    for (const auto& f : t.factors()) n.add_factor(f.poly, -f.exponent);
    return n;
}

}  // namespace

TEST_CASE("univariate cyclotomic example") {
    auto reg = make_registry({"z1"}, {"g"});
    Twist t = cyclotomic_twist(reg);

    CHECK(t.omega_component(0) ==
          parse_ratfunc(reg, "g*(7*z1^6+6*z1^5+5*z1^4+4*z1^3+3*z1^2+2*z1+1)"
                             "/(z1*(z1^6+z1^5+z1^4+z1^3+z1^2+z1+1))"));
    CHECK(cohomology_dim(t, {0}) == 6);

    FibrationPlan plan(t, {"z1"});
    CHECK(plan.dim(1) == 6);

    RatFunc phiL = parse_ratfunc(reg, "1/z1^2");
    RatFunc phiR = parse_ratfunc(reg, "1");
    RatFunc result = plan.intersection_number(phiL, phiR);
    CHECK(result == parse_ratfunc(reg, "6*g/((1-g)*(1-7*g))"));

    // The reduced representatives with only simple poles.
    MatRF Om = plan.omega(1);
    VecRF L = reduce_to_simple_poles({phiL}, mat_transpose(Om), 0);
    CHECK(L[0] == parse_ratfunc(reg, "g/(1-g)*(6*z1^5+5*z1^4+4*z1^3+3*z1^2+2*z1+1)"
                                     "/(z1*(z1^6+z1^5+z1^4+z1^3+z1^2+z1+1))"));
    VecRF R = reduce_to_simple_poles({phiR}, mat_neg(Om), 0);
    CHECK(R[0] == parse_ratfunc(reg, "-g/(1-7*g)*(z1^5+2*z1^4+3*z1^3+4*z1^2+5*z1+6)"
                                     "/(z1^6+z1^5+z1^4+z1^3+z1^2+z1+1)"));
}

TEST_CASE("elliptic curve example, inner variable z2") {
    auto reg = make_registry({"z1", "z2"}, {"g"});
    Twist t = elliptic_twist(reg);

    CHECK(t.omega_component(0) ==
          parse_ratfunc(reg, "g*(z2^2-16*z1^3+22*z1-7)"
                             "/(z1*(z2^2-4*z1^3+11*z1-7))"));
    CHECK(t.omega_component(1) ==
          parse_ratfunc(reg, "g*(3*z2^2-4*z1^3+11*z1-7)"
                             "/(z2*(z2^2-4*z1^3+11*z1-7))"));
    CHECK(cohomology_dim(t, {1}) == 2);  // fibre in z2: basis (1, z2)
    CHECK(cohomology_dim(t, {0, 1}) == 6);

    FibrationPlan plan(t, {"z2", "z1"});
    CHECK(plan.dim(1) == 2);
    CHECK(plan.dim(2) == 6);

    // Dual basis of the z2 fibre.
    REQUIRE(plan.basis(1).size() == 2);
    CHECK(plan.basis(1)[0] == parse_ratfunc(reg, "1"));
    CHECK(plan.basis(1)[1] == parse_ratfunc(reg, "z2"));
    // Dual representatives are fixed only up to an overall sign convention
    // shared with the left coefficients; the product d_j * L_j is what
    // enters the final pairing and is convention independent.
    CHECK(plan.dual(1)[0] ==
          parse_ratfunc(reg, "-(1-3*g)*(1+3*g)/(2*g*(4*z1^3-11*z1+7))"));
    CHECK(plan.dual(1)[1] ==
          parse_ratfunc(reg, "-3*(2-3*g)*(2+3*g)*z2/(2*g*(4*z1^3-11*z1+7)^2)"));

    // The connection matrix in z1 is diagonal.
    const MatRF& Om = plan.omega(2);
    CHECK(Om[0][1].is_zero());
    CHECK(Om[1][0].is_zero());
    CHECK(Om[0][0] ==
          parse_ratfunc(reg, "(12*z1^2-11)/(2*(4*z1^3-11*z1+7))"
                             " + g*(44*z1^3-55*z1+14)/(2*z1*(4*z1^3-11*z1+7))"));
    CHECK(Om[1][1] ==
          parse_ratfunc(reg, "(12*z1^2-11)/(4*z1^3-11*z1+7)"
                             " + g*(44*z1^3-55*z1+14)/(2*z1*(4*z1^3-11*z1+7))"));
    CHECK(det_exact(Om) ==
          parse_ratfunc(reg,
                        "(4*(3+11*g)*z1^3 - 11*(1+5*g)*z1 + 14*g)"
                        "*(4*(6+11*g)*z1^3 - 11*(2+5*g)*z1 + 14*g)"
                        "/(4*z1^2*(z1-1)^2*(4*z1^2+4*z1-7)^2)"));

    RatFunc phiL = parse_ratfunc(reg, "1/(z2^2 - 4*z1^3 + 11*z1 - 7)");
    RatFunc phiR = parse_ratfunc(reg, "z1/(z2^2 - 4*z1^3 + 11*z1 - 7)");

    VecRF L = plan.expand_left(2, phiL);
    CHECK(L[0] == parse_ratfunc(reg, "-(1+3*g)/(2*g*(4*z1^3-11*z1+7))"));
    CHECK(L[1].is_zero());
    VecRF R = plan.expand_right(2, phiR);
    CHECK(R[0] == parse_ratfunc(reg, "-z1/(1+3*g)"));
    CHECK(R[1].is_zero());

    VecRF Rred = reduce_to_simple_poles(R, mat_neg(Om), 0);
    CHECK(Rred[0] ==
          parse_ratfunc(reg, "z1*(21-22*z1)/((1-11*g)*(4*z1^3-11*z1+7))"));

    CHECK(plan.intersection_number(phiL, phiR) ==
          parse_ratfunc(reg, "1/(4*(1-11*g)*g)"));
}

TEST_CASE("elliptic curve example, inner variable z1") {
    auto reg = make_registry({"z1", "z2"}, {"g"});
    Twist t = elliptic_twist(reg);
    CHECK(cohomology_dim(t, {0}) == 3);  // fibre in z1: basis (1, z1, z1^2)

    FibrationPlan plan(t, {"z1", "z2"});
    CHECK(plan.dim(1) == 3);
    CHECK(plan.dim(2) == 6);

    CHECK(det_exact(plan.omega(2)) ==
          parse_ratfunc(reg,
                        "((2+11*g)*(4+11*g)*(6+11*g)*z2^6"
                        " - 231*g*(33*g^2+24*g+4)*z2^4"
                        " + 2*g^2*(3949*g+1315)*z2^2 + 56*g^3)"
                        "/(z2^3*(z2^2-7)*(27*z2^4-378*z2^2-8))"));

    RatFunc phiL = parse_ratfunc(reg, "1/(z2^2 - 4*z1^3 + 11*z1 - 7)");
    RatFunc phiR = parse_ratfunc(reg, "z1/(z2^2 - 4*z1^3 + 11*z1 - 7)");
    CHECK(plan.intersection_number(phiL, phiR) ==
          parse_ratfunc(reg, "1/(4*(1-11*g)*g)"));
}

TEST_CASE("gauge invariance of the pairing") {
    auto reg = make_registry({"z1"}, {"g"});
    Twist t = cyclotomic_twist(reg);
    FibrationPlan plan(t, {"z1"});

    RatFunc omega = t.omega_component(0);
    RatFunc phiL = parse_ratfunc(reg, "1/z1^2");
    RatFunc phiR = parse_ratfunc(reg, "z1");
    RatFunc base = plan.intersection_number(phiL, phiR);

    for (const char* xi_str : {"z1^2", "1/(z1-2)", "z1^3/(z1-2)"}) {
        RatFunc xi = parse_ratfunc(reg, xi_str);
        RatFunc shifted = phiL + xi.derivative("z1") + omega * xi;
        CHECK(plan.intersection_number(shifted, phiR) == base);
        RatFunc shiftedR = phiR + xi.derivative("z1") - omega * xi;
        CHECK(plan.intersection_number(phiL, shiftedR) == base);
    }
}

TEST_CASE("swap symmetry under twist negation") {
    // <phiL | phiR>_w = (-1)^n <phiR | phiL>_{-w}
    {
        auto reg = make_registry({"z1"}, {"g"});
        Twist t = cyclotomic_twist(reg);
        FibrationPlan plan(t, {"z1"});
        FibrationPlan plan_neg(negated(t), {"z1"});
        RatFunc a = parse_ratfunc(reg, "1/z1^2");
        RatFunc b = parse_ratfunc(reg, "z1+1");
        CHECK(plan.intersection_number(a, b) ==
              -plan_neg.intersection_number(b, a));
    }
    {
        auto reg = make_registry({"z1", "z2"}, {"g"});
        Twist t = elliptic_twist(reg);
        FibrationPlan plan(t, {"z2", "z1"});
        FibrationPlan plan_neg(negated(t), {"z2", "z1"});
        RatFunc a = parse_ratfunc(reg, "1/(z2^2 - 4*z1^3 + 11*z1 - 7)");
        RatFunc b = parse_ratfunc(reg, "z1/(z2^2 - 4*z1^3 + 11*z1 - 7)");
        CHECK(plan.intersection_number(a, b) ==
              plan_neg.intersection_number(b, a));
    }
}

TEST_CASE("basis duality at the inner level") {
    auto reg = make_registry({"z1", "z2"}, {"g"});
    Twist t = elliptic_twist(reg);
    FibrationPlan plan(t, {"z2", "z1"});
    for (std::size_t j = 0; j < plan.dim(1); ++j)
        for (std::size_t k = 0; k < plan.dim(1); ++k) {
            RatFunc v = plan.pairing(1, plan.basis(1)[j], plan.dual(1)[k]);
            CHECK(v == (j == k ? RatFunc::constant(reg, 1) : RatFunc(reg)));
        }
}

TEST_CASE("intersection matrix and bilinearity") {
    auto reg = make_registry({"z1"}, {"g"});
    Twist t = cyclotomic_twist(reg);
    FibrationPlan plan(t, {"z1"});
    std::vector<RatFunc> Ls = {parse_ratfunc(reg, "1"), parse_ratfunc(reg, "z1")};
    std::vector<RatFunc> Rs = {parse_ratfunc(reg, "1"), parse_ratfunc(reg, "1/z1")};
    MatRF m = plan.intersection_matrix(Ls, Rs);
    CHECK(m.size() == 2);
    CHECK(plan.intersection_number(Ls[0] + Ls[1] * Rat(3), Rs[1]) ==
          m[0][1] + Rat(3) * m[1][1]);
}

TEST_CASE("rotation produces an equivalent twist") {
    auto reg = make_registry({"z1", "z2"}, {"g"});
    Twist t = elliptic_twist(reg);
    Twist tr = rotate_coordinates(t, "z1", "z2", Rat(1), Rat(0));
    for (std::size_t i = 0; i < t.factors().size(); ++i)
        CHECK(tr.factors()[i].poly == t.factors()[i].poly);

    Twist tr2 = rotate_coordinates(t, "z1", "z2", Rat(0), Rat(1));
    CHECK(tr2.factors()[0].poly == parse_poly(reg, "z2"));
    CHECK(tr2.factors()[1].poly == parse_poly(reg, "-z1"));
}
