#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "intwist/expr.hpp"
#include "intwist/linalg.hpp"
#include "intwist/partialfrac.hpp"
#include "intwist/residue.hpp"

using namespace intwist;

namespace {

RegistryPtr xy_reg() { return make_registry({"x", "y"}, {"a", "b"}); }

MultiPoly random_poly(const RegistryPtr& reg, std::mt19937& rng, int max_deg,
                      int nterms) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> expo(0, max_deg);
    MultiPoly p(reg);
    for (int t = 0; t < nterms; ++t) {
        ExpVec e(reg->size(), 0);
        e[0] = static_cast<unsigned>(expo(rng));
        e[1] = static_cast<unsigned>(expo(rng));
        int c = coeff(rng);
        if (c) p += MultiPoly::monomial(reg, e, Rat(c));
    }
    return p;
}

UniPoly random_unipoly(const RegistryPtr& reg, std::mt19937& rng, int deg) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::vector<RatFunc> c;
    for (int k = 0; k < deg; ++k)
        c.push_back(RatFunc::constant(reg, Rat(coeff(rng))));
    c.push_back(RatFunc::constant(reg, Rat(1)));  // monic, guaranteed nonzero
    return UniPoly(reg, 0, std::move(c));
}

}  // namespace

TEST_CASE("multipoly arithmetic and canonical string") {
    auto reg = xy_reg();
    MultiPoly x = MultiPoly::variable(reg, "x");
    MultiPoly y = MultiPoly::variable(reg, "y");
    MultiPoly one = MultiPoly::constant(reg, 1);

    MultiPoly p = (x + y) * (x - y);
    CHECK(p == x * x - y * y);
    CHECK(p.to_string() == "x^2-y^2");

    MultiPoly q = (x + one).pow(3);
    CHECK(q.to_string() == "x^3+3*x^2+3*x+1");
    CHECK(q.degree_in("x") == 3);
    CHECK(q.degree_in("y") == 0);
    CHECK(q.total_deg() == 3);

    CHECK((p - p).is_zero());
    CHECK(MultiPoly(reg).to_string() == "0");
    CHECK((x * Rat(0)).is_zero());
}

TEST_CASE("expr parser round trips") {
    auto reg = xy_reg();
    CHECK(parse_poly(reg, "(x+y)^2").to_string() == "x^2+2*x*y+y^2");
    CHECK(parse_poly(reg, "2*x - 3*y + 1").to_string() == "2*x-3*y+1");
    CHECK(parse_ratfunc(reg, "1/2").constant_value() == Rat(1, 2));
    CHECK(parse_ratfunc(reg, "x^-1").to_string() == "(1)/(x)");
    CHECK(parse_ratfunc(reg, "-a*x/(x^2-1)").to_string() == "(-x*a)/(x^2-1)");
    CHECK_THROWS_AS(parse_poly(reg, "x + w"), ParseError);
    CHECK_THROWS_AS(parse_poly(reg, "x + "), ParseError);
    CHECK_THROWS_AS(parse_poly(reg, "x)"), ParseError);
    CHECK_THROWS_AS(parse_poly(reg, "1/x"), ParseError);
}

TEST_CASE("derivative and substitution") {
    auto reg = xy_reg();
    MultiPoly p = parse_poly(reg, "x^3*y + 2*x*y^2 + a");
    CHECK(p.derivative("x").to_string() == "3*x^2*y+2*y^2");
    CHECK(p.derivative("y").to_string() == "x^3+4*x*y");
    CHECK(p.derivative("b").is_zero());

    std::map<std::string, MultiPoly> sub{{"x", parse_poly(reg, "y+1")}};
    CHECK(parse_poly(reg, "x^2-1").substitute(sub).to_string() == "y^2+2*y");

    RatFunc f = parse_ratfunc(reg, "1/x");
    CHECK(f.derivative("x").to_string() == "(-1)/(x^2)");
}

TEST_CASE("exact division is a partial inverse of multiplication") {
    auto reg = xy_reg();
    std::mt19937 rng(12345);
    for (int it = 0; it < 40; ++it) {
        MultiPoly a = random_poly(reg, rng, 3, 4);
        MultiPoly b = random_poly(reg, rng, 3, 4);
        if (b.is_zero()) continue;
        CHECK((a * b).divide_exact(b) == a);
    }
    MultiPoly x = MultiPoly::variable(reg, "x");
    CHECK_THROWS_AS((x * x + MultiPoly::constant(reg, 1)).divide_exact(x), Error);
}

TEST_CASE("multivariate gcd") {
    auto reg = xy_reg();
    MultiPoly f = parse_poly(reg, "(x+y)*(x-y)");
    MultiPoly g = parse_poly(reg, "(x+y)^2*(x+2)");
    CHECK(gcd_poly(f, g).to_string() == "x+y");

    // Content and sign normalization.
    MultiPoly h = parse_poly(reg, "-4*x - 4*y");
    CHECK(gcd_poly(h, g * Rat(6)).to_string() == "x+y");

    // Coprime inputs.
    CHECK(gcd_poly(parse_poly(reg, "x+1"), parse_poly(reg, "y+1")).to_string() == "1");

    // Parameters participate like variables.
    MultiPoly p = parse_poly(reg, "(a*x+b)*(x-y+1)");
    MultiPoly q = parse_poly(reg, "(a*x+b)*(y+3)");
    CHECK(gcd_poly(p, q).to_string() == "x*a+b");

    // gcd(p, 0) is the normalized p.
    CHECK(gcd_poly(parse_poly(reg, "-2*x^2+2"), MultiPoly(reg)).to_string() ==
          "x^2-1");

    std::mt19937 rng(777);
    for (int it = 0; it < 25; ++it) {
        MultiPoly a = random_poly(reg, rng, 2, 3);
        MultiPoly b = random_poly(reg, rng, 2, 3);
        MultiPoly c = random_poly(reg, rng, 2, 3);
        if (c.is_zero()) continue;
        MultiPoly g2 = gcd_poly(a * c, b * c);
        if ((a * c).is_zero() || (b * c).is_zero()) continue;
        // c divides the gcd; the gcd divides both products.
        CHECK_NOTHROW(g2.divide_exact(gcd_poly(c, g2)));
        CHECK_NOTHROW((a * c).divide_exact(g2));
        CHECK_NOTHROW((b * c).divide_exact(g2));
        CHECK(gcd_poly(c, g2).to_string() == detail::make_primitive(c).to_string());
    }
}

TEST_CASE("ratfunc normal form") {
    auto reg = xy_reg();
    RatFunc f = parse_ratfunc(reg, "(x^2-1)/(x-1)");
    CHECK(f.is_polynomial());
    CHECK(f.to_string() == "x+1");

    RatFunc g = parse_ratfunc(reg, "1/(-2*x+2)");
    CHECK(g.den().to_string() == "x-1");
    CHECK(g.num().to_string() == "-1/2");

    RatFunc h = parse_ratfunc(reg, "(x+y)/(x*y)") + parse_ratfunc(reg, "-1/y");
    CHECK(h.to_string() == "(1)/(x)");
    CHECK((h - h).is_zero());
    CHECK(h * h.inverse() == RatFunc::constant(reg, 1));
    CHECK_THROWS_AS(RatFunc(reg).inverse(), ZeroDenominator);
    CHECK(parse_ratfunc(reg, "a/b").pow(-2).to_string() == "(b^2)/(a^2)");
}

TEST_CASE("univariate divmod, gcd and extended euclid") {
    auto reg = xy_reg();
    std::mt19937 rng(999);
    for (int it = 0; it < 30; ++it) {
        UniPoly a = random_unipoly(reg, rng, 5);
        UniPoly b = random_unipoly(reg, rng, 2);
        auto [q, r] = divmod(a, b);
        CHECK(q * b + r == a);
        CHECK(r.deg() < b.deg());

        auto eg = extended_euclid(a, b);
        CHECK(eg.s * a + eg.t * b == eg.g);
        if (!eg.g.is_zero()) CHECK(eg.g.lead() == RatFunc::constant(reg, 1));
    }

    // Coefficients from the parameter field.
    UniPoly p = UniPoly::from_poly(parse_poly(reg, "a*x^2 - b^2*a"), 0);
    UniPoly q = UniPoly::from_poly(parse_poly(reg, "x - b"), 0);
    CHECK(gcd_uni(p, q) == q);  // x - b is monic already
}

TEST_CASE("squarefree factorization") {
    auto reg = xy_reg();
    UniPoly p = UniPoly::from_poly(parse_poly(reg, "x*(x-1)^2*(x+2)^3"), 0);
    auto fac = squarefree_factor(p);
    REQUIRE(fac.size() == 3);
    CHECK(fac[0].second == 1);
    CHECK(fac[0].first.to_ratfunc().to_string() == "x");
    CHECK(fac[1].second == 2);
    CHECK(fac[1].first.to_ratfunc().to_string() == "x-1");
    CHECK(fac[2].second == 3);
    CHECK(fac[2].first.to_ratfunc().to_string() == "x+2");
    CHECK(squarefree_part(p).to_ratfunc().to_string() == "x^3+x^2-2*x");

    // Reconstruction property on random products.
    std::mt19937 rng(4242);
    for (int it = 0; it < 10; ++it) {
        UniPoly f = random_unipoly(reg, rng, 2);
        UniPoly g = random_unipoly(reg, rng, 1);
        UniPoly prod = f * g * g;
        UniPoly rebuilt =
            UniPoly::constant(reg, 0, RatFunc::constant(reg, 1)) * prod.lead();
        for (const auto& [h, m] : squarefree_factor(prod))
            for (int i = 0; i < m; ++i) rebuilt *= h;
        CHECK(rebuilt == prod);
    }
}

TEST_CASE("pole data and simple-form test") {
    auto reg = xy_reg();
    CHECK(is_simple_form(parse_ratfunc(reg, "1/x"), 0));
    CHECK_FALSE(is_simple_form(parse_ratfunc(reg, "1/x^2"), 0));
    CHECK_FALSE(is_simple_form(parse_ratfunc(reg, "x"), 0));  // pole at infinity
    CHECK(is_simple_form(parse_ratfunc(reg, "1/(x^2-1)"), 0));
    CHECK(is_simple_form(RatFunc(reg), 0));

    PoleData pd = pole_data(parse_ratfunc(reg, "(x^3+1)/(x-1)^2"), 0);
    CHECK(pd.num_deg == 3);
    CHECK(pd.den_deg == 2);
    CHECK(infinity_form_order(pd) == 3);
    REQUIRE(pd.finite.size() == 1);
    CHECK(pd.finite[0].second == 2);
}

TEST_CASE("partial fractions") {
    auto reg = xy_reg();
    // Factors split by multiplicity: x-1 at order 1, x+1 at order 2.
    RatFunc f = parse_ratfunc(reg, "1/((x-1)*(x+1)^2)");
    auto pf = partial_fractions(f, 0);
    CHECK(pf.poly_part.is_zero());
    REQUIRE(pf.terms.size() == 3);
    for (const auto& t : pf.terms) {
        REQUIRE(t.q.deg() == 1);
        Rat root = -t.q.coeff(0).constant_value();
        Rat num = t.num.coeff(0).constant_value();
        if (root == 1) {
            CHECK(t.k == 1);
            CHECK(num == Rat(1, 4));
        } else if (t.k == 1) {
            CHECK(num == Rat(-1, 4));
        } else {
            CHECK(t.k == 2);
            CHECK(num == Rat(-1, 2));
        }
    }

    // Reconstruction on random inputs with repeated factors.
    std::mt19937 rng(31337);
    for (int it = 0; it < 20; ++it) {
        UniPoly num = random_unipoly(reg, rng, 6);
        UniPoly d1 = random_unipoly(reg, rng, 1);
        UniPoly d2 = random_unipoly(reg, rng, 2);
        if (gcd_uni(d1, d2).deg() > 0) continue;
        if (gcd_uni(d2, d2.derivative()).deg() > 0) continue;
        RatFunc g = num.to_ratfunc() / (d1.to_ratfunc().pow(2) * d2.to_ratfunc());
        auto dec = partial_fractions(g, 0);
        RatFunc back = dec.poly_part.to_ratfunc();
        for (const auto& t : dec.terms) {
            CHECK(t.num.deg() < t.q.deg());
            back += t.num.to_ratfunc() / t.q.to_ratfunc().pow(t.k);
        }
        CHECK(back == g);
    }
}

TEST_CASE("exact linear algebra") {
    auto reg = xy_reg();
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> coeff(-3, 3);
    auto rf = [&](const char* s) { return parse_ratfunc(reg, s); };

    MatRF A = {{rf("x"), rf("1"), rf("0")},
               {rf("1"), rf("a"), rf("2")},
               {rf("0"), rf("y"), rf("x+1")}};
    RatFunc d = det_exact(A);
    // Cofactor expansion along the first row, by hand.
    RatFunc expect = rf("x") * (rf("a") * rf("x+1") - rf("2*y")) -
                     (rf("x+1") - rf("0"));
    CHECK(d == expect);

    VecRF b = {rf("1"), rf("y"), rf("a*x")};
    VecRF sol = solve_exact(A, b);
    for (std::size_t i = 0; i < 3; ++i) {
        RatFunc acc(reg);
        for (std::size_t j = 0; j < 3; ++j) acc += A[i][j] * sol[j];
        CHECK(acc == b[i]);
    }

    MatRF inv = inverse_exact(A);
    MatRF id = mat_mul(A, inv);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(id[i][j] == (i == j ? rf("1") : RatFunc(reg)));

    MatRF adj = adjugate_exact(A);
    MatRF prod = mat_mul(adj, A);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(prod[i][j] == (i == j ? d : RatFunc(reg)));

    MatRF sing = {{rf("x"), rf("x")}, {rf("1"), rf("1")}};
    CHECK(det_exact(sing).is_zero());
    CHECK_THROWS_AS(solve_exact(sing, MatRF{{rf("1")}, {rf("0")}}), SingularSystem);
}

TEST_CASE("global residue and bezoutian duals") {
    auto reg = xy_reg();
    auto rf = [&](const char* s) { return parse_ratfunc(reg, s); };

    // P = x^2 - 1: residues of f/P at x = 1 and x = -1.
    UniPoly P = UniPoly::from_poly(parse_poly(reg, "x^2-1"), 0);
    CHECK(global_residue(rf("1"), P).is_zero());
    CHECK(global_residue(rf("x"), P) == rf("1"));
    // f = y/(x - a): residue sum = y/(2(1-a)) + y/((-2)(-1-a)) = y/(1-a^2).
    CHECK(global_residue(rf("y/(x-a)"), P) == rf("y/(1-a^2)"));
    CHECK_THROWS_AS(global_residue(rf("1/(x-1)"), P), NotCoprime);

    // Duality of the Bezoutian basis against the monomials.
    UniPoly Q = UniPoly::from_poly(parse_poly(reg, "2*x^3 + a*x^2 - x + y"), 0);
    auto w = bezoutian_dual(Q);
    REQUIRE(w.size() == 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            RatFunc mono = UniPoly::constant(reg, 0, rf("1")).shift(i).to_ratfunc();
            RatFunc val = global_residue(mono * w[static_cast<std::size_t>(j)].to_ratfunc(), Q);
            CHECK(val == (i == j ? rf("1") : RatFunc(reg)));
        }
    }
}
