#include <catch2/catch_amalgamated.hpp>

#include "intwist/expr.hpp"
#include "intwist/feynman.hpp"
#include "intwist/oracle.hpp"
#include "sunrise_shared.hpp"

using namespace intwist;

namespace {

BaikovSetup sunrise_setup(const RegistryPtr& reg, const std::string& m1sq,
                          const std::string& m2sq) {
    return sunrise::setup(reg, m1sq, m2sq);
}

// Non-planar two-loop family for the Higgs decay top sector; z7 is the
// auxiliary propagator.
BaikovSetup higgs_setup(const RegistryPtr& reg) {
    DotTable dots;
    dots.set("p1", "p1", RatFunc(reg));
    dots.set("p2", "p2", RatFunc(reg));
    dots.set("p1", "p2", parse_ratfunc(reg, "-P/2"));
    std::vector<PropSpec> props = {
        {{{"k1", Rat(1)}}, parse_ratfunc(reg, "mt2")},
        {{{"k1", Rat(1)}, {"p1", Rat(-1)}, {"p2", Rat(-1)}}, parse_ratfunc(reg, "mt2")},
        {{{"k1", Rat(1)}, {"k2", Rat(1)}}, RatFunc(reg)},
        {{{"k1", Rat(1)}, {"k2", Rat(1)}, {"p1", Rat(-1)}}, RatFunc(reg)},
        {{{"k2", Rat(1)}}, parse_ratfunc(reg, "mW2")},
        {{{"k2", Rat(1)}, {"p2", Rat(1)}}, parse_ratfunc(reg, "mt2")},
        {{{"k1", Rat(1)}, {"p1", Rat(-1)}}, parse_ratfunc(reg, "mt2")},
    };
    return BaikovSetup(reg, {"k1", "k2"}, {"p1", "p2"}, dots, props,
                       {"z1", "z2", "z3", "z4", "z5", "z6", "z7"});
}

}  // namespace

TEST_CASE("gram determinant basics") {
    auto reg = make_registry({}, {"P", "Q"});
    auto dot = [&](const std::string& a, const std::string& b) -> RatFunc {
        if (a == b) return parse_ratfunc(reg, "-" + a);
        return RatFunc(reg);  // orthogonal
    };
    CHECK(gram_determinant({{{"P", Rat(1)}}}, dot) == parse_ratfunc(reg, "-P"));
    CHECK(gram_determinant({{{"P", Rat(1)}}, {{"Q", Rat(1)}}}, dot) ==
          parse_ratfunc(reg, "P*Q"));
}

TEST_CASE("sunrise Baikov polynomial and maximal cut") {
    auto reg = make_registry({"z1", "z2", "z3", "z4", "z5"}, {"x", "y1", "y2"});

    SECTION("equal masses reproduce the printed cut polynomial") {
        BaikovSetup s = sunrise_setup(reg, "1", "1");
        CHECK(s.n() == 5);
        MultiPoly cut = s.cut({"z3", "z4", "z5"});
        MultiPoly expect =
            parse_poly(reg, "1/4*((1-x)^2 - z1*z2*(z1+z2+x+3))");
        CHECK(cut == expect);
    }

    SECTION("unequal masses specialise to the equal-mass polynomial") {
        BaikovSetup s = sunrise_setup(reg, "y1", "y2");
        MultiPoly cut = s.cut({"z3", "z4", "z5"});
        std::map<std::string, MultiPoly> eq = {
            {"y1", MultiPoly::constant(reg, 1)},
            {"y2", MultiPoly::constant(reg, 1)}};
        CHECK(cut.substitute(eq) ==
              parse_poly(reg, "1/4*((1-x)^2 - z1*z2*(z1+z2+x+3))"));
    }
}

TEST_CASE("equal-mass sunrise cut violates the critical point count") {
    auto reg = make_registry({"z1", "z2"}, {"x", "e"});
    MultiPoly p1 = parse_poly(reg, "1/4*((1-x)^2 - z1*z2*(z1+z2+x+3))");
    Twist t = maximal_cut_twist(p1, parse_ratfunc(reg, "-e"));

    CHECK(cohomology_dim(t, {0, 1}) == 4);
    CHECK_THROWS_AS(FibrationPlan(t, {"z1", "z2"}), DegenerateFibration);

    // Printed connection determinants of the naive order (z1, z2).
    PlanOptions opt;
    opt.check_assumptions = false;
    FibrationPlan naive(t, {"z1", "z2"}, opt);
    CHECK(det_exact(naive.omega(1)) ==
          parse_ratfunc(reg, "-e*z2*(2*z1+x+3+z2)"
                             "/(z2*z1^2+z2*(x+3+z2)*z1-(1-x)^2)"));
    RatFunc d2 = det_exact(naive.omega(2));
    CHECK(d2 == parse_ratfunc(reg,
                              "((1-3*e)*z2^3+(1-4*e)*(x+3)*z2^2-e*(x+3)^2*z2"
                              "-2*(1-x)^2)/(z2*(z2+4)*(z2^2+2*(x+1)*z2+(1-x)^2))"));
    CHECK(d2.num().degree_in("z2") == 3);  // one critical point short of four

    // The hint carried by the failure.
    try {
        FibrationPlan bad(t, {"z1", "z2"});
        FAIL("expected a degenerate fibration");
    } catch (const DegenerateFibration& err) {
        CHECK(err.rotation_hint == "rotate z1 z2 1 2");
    }
}

TEST_CASE("rotated equal-mass sunrise matches the unequal-mass limit") {
    sunrise::Symbolic s = sunrise::make_symbolic();

    // Cross-check the symbolic cut polynomial at equal masses.
    auto reg = s.reg;
    std::map<std::string, MultiPoly> eq = {
        {"y1", MultiPoly::constant(reg, 1)}, {"y2", MultiPoly::constant(reg, 1)}};
    CHECK(s.bcut.substitute(eq) ==
          parse_poly(reg, "1/4*((1-x)^2 - z1*z2*(z1+z2+x+3))"));

    // Equal-mass block from the rotated plan at a numeric kinematic point.
    Rat x0(9, 4), e0(1, 7);
    sunrise::BlockResult rot = sunrise::block_at(
        s, {{"x", x0}, {"y1", Rat(1)}, {"y2", Rat(1)}, {"e", e0}},
        /*with_y1=*/false, /*rotated=*/true);
    CHECK(rot.det_c != 0);  // the 4x4 intersection matrix has rank 4

    // The same block as the y1 = y2 = 1 limit of the unequal-mass family,
    // reconstructed along the slice y1 = 1, y2 = t. Exact equality expected.
    sunrise::RatMat lim = sunrise::unequal_limit_block(s, x0, e0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(rot.ax[i][j] == lim[i][j]);
}

TEST_CASE("Higgs decay top sector") {
    auto reg = make_registry({"z1", "z2", "z3", "z4", "z5", "z6", "z7"},
                             {"P", "mt2", "mW2", "e"});
    BaikovSetup s = higgs_setup(reg);
    CHECK(s.n() == 7);
    MultiPoly cut = s.cut({"z1", "z2", "z3", "z4", "z5", "z6"});
    CHECK(cut == parse_poly(reg, "1/16*(z7-P)^2*(z7+mW2-mt2)^2"));

    Twist t = maximal_cut_twist(cut, parse_ratfunc(reg, "-1/2-e"));
    FibrationPlan plan(t, {"z7"});
    CHECK(plan.dim(1) == 1);

    std::vector<RatFunc> master = {RatFunc::constant(reg, 1)};
    TopLevelDuals duals = top_level_duals(plan, master, master);
    // Same dual-sign convention as the elliptic example: the dual element is
    // fixed only jointly with the left coefficients, and the engine's uniform
    // choice flips the standalone representative.
    RatFunc dhat = duals.cinv[0][0];
    CHECK(dhat == parse_ratfunc(reg, "-2*(1+4*e)*(3+4*e)"
                                     "/((1+2*e)*(P+mW2-mt2)^2)"));
    CHECK(plan.intersection_number(master[0], dhat) ==
          RatFunc::constant(reg, 1));

    RatFunc target = RatFunc::variable(reg, "z7");
    RatFunc c = reduction_coefficient(plan, target, master, 0);
    CHECK(c == parse_ratfunc(reg, "1/2*(P+mt2-mW2)"));

    // Linearity and the trivial self-reduction.
    CHECK(reduction_coefficient(plan, target * Rat(2), master, 0) == c * Rat(2));
    CHECK(reduction_coefficient(plan, master[0], master, 0) ==
          RatFunc::constant(reg, 1));
}
