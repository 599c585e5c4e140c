#include <catch2/catch_amalgamated.hpp>

#include "eds/affine.hpp"
#include "eds/parse.hpp"

#include "generators.hpp"

using namespace eds;

namespace {

bool form_vanishes(const Form& f) {
    Form g = f;
    return g.prune().is_structurally_zero();
}

AffineElement random_affine(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> c(-3, 3);
    for (;;) {
        Rational a(c(rng)), b(c(rng)), d(c(rng)), e(c(rng));
        if (a * e - b * d == 0) continue;
        std::uniform_int_distribution<int> t(-2, 2);
        return AffineElement::from_rationals({a, b, d, e, Rational(t(rng)), Rational(t(rng))});
    }
}

} // namespace

TEST_CASE("maurer-cartan coframe formulas") {
    auto w = maurer_cartan_coframe();

    // coefficient of dx_1 in w1 is x_6/D
    Expr D = parse("x_3*x_6 - x_4*x_5");
    CHECK(is_zero(w[0].coefficient({0}) - sym("x_6") / D));

    // at x3 = x6 = 1, x4 = x5 = 0 the coframe collapses to the coordinate one
    std::map<std::string, Expr> pt = {
        {"x_3", one()}, {"x_4", zero()}, {"x_5", zero()}, {"x_6", one()}};
    for (int i = 0; i < 6; ++i) {
        for (const auto& [idx, c] : w[static_cast<std::size_t>(i)].coeffs) {
            Expr v = substitute(c, pt);
            if (idx[0] == i) CHECK(is_zero(v - one()));
            else CHECK(is_zero(v));
        }
    }
    // independence wherever D != 0
    Assumptions asmp;
    CHECK(sym_rank(coefficient_matrix(w), &asmp) == 6);
}

TEST_CASE("structure equations hold exactly") {
    auto w = maurer_cartan_coframe();
    StructureCheck sc = verify_structure_equations(w);
    CHECK(sc.ok);
    for (const auto& r : sc.residuals) CHECK(r.is_structurally_zero());

    // scaling one form breaks the quadratic relations
    auto broken = w;
    broken[0] = num(2L) * broken[0];
    CHECK_FALSE(verify_structure_equations(broken).ok);
}

TEST_CASE("basis changes preserve the structure equations") {
    auto w = maurer_cartan_coframe();

    // identity change
    auto same = change_basis(w, BasisChange(1, 0, 1));
    for (int i = 0; i < 6; ++i)
        CHECK(form_vanishes(same[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(i)]));

    // the normalization b', 0, b' used to set a constant to 1
    auto scaled = change_basis(w, BasisChange(Rational(5), Rational(0), Rational(5)));
    CHECK(verify_structure_equations(scaled).ok);

    // twenty random admissible draws
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> c(-4, 4);
    int done = 0;
    while (done < 20) {
        Rational a(c(rng)), b(c(rng)), cc(c(rng));
        if (a == 0 || cc == 0) continue;
        auto w2 = change_basis(w, BasisChange(a, b, cc));
        CHECK(verify_structure_equations(w2).ok);
        ++done;
    }

    // composing changes stays in the family
    BasisChange bc1(2, 1, 3), bc2(1, -2, 2);
    auto via_two = change_basis(change_basis(w, bc1), bc2);
    auto via_one = change_basis(w, compose(bc1, bc2));
    for (int i = 0; i < 6; ++i)
        CHECK(form_vanishes(via_two[static_cast<std::size_t>(i)] -
                            via_one[static_cast<std::size_t>(i)]));
}

TEST_CASE("group operations") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 10; ++i) {
        AffineElement g = random_affine(rng);
        AffineElement gi = inverse(g);
        AffineElement id = compose(g, gi);
        CHECK(is_zero(id.linear[0][0] - one()));
        CHECK(is_zero(id.linear[0][1]));
        CHECK(is_zero(id.linear[1][0]));
        CHECK(is_zero(id.linear[1][1] - one()));
        CHECK(is_zero(id.translation[0]));
        CHECK(is_zero(id.translation[1]));
    }

    // associativity on random triples
    for (int i = 0; i < 5; ++i) {
        AffineElement g = random_affine(rng), h = random_affine(rng), k = random_affine(rng);
        AffineElement lhs = compose(compose(g, h), k);
        AffineElement rhs = compose(g, compose(h, k));
        for (int r = 0; r < 2; ++r)
            for (int cidx = 0; cidx < 2; ++cidx)
                CHECK(is_zero(lhs.linear[r][cidx] - rhs.linear[r][cidx]));
        CHECK(is_zero(lhs.translation[0] - rhs.translation[0]));
        CHECK(is_zero(lhs.translation[1] - rhs.translation[1]));
    }

    // the shear X = x, Y = y - cx sends (1, c) to (1, 0)
    Expr c = num(3L);
    AffineElement shear({{one(), zero()}, {-c, one()}}, {zero(), zero()});
    auto [X, Y] = apply(shear, one(), c);
    CHECK(is_zero(X - one()));
    CHECK(is_zero(Y));

    // determinant invariant is enforced
    CHECK_THROWS_AS(AffineElement({{one(), one()}, {one(), one()}}, {zero(), zero()}),
                    SingularError);
}

TEST_CASE("transform_ode") {
    Expr x = sym("x"), y = sym("y");

    // identity fixes every equation
    OdeRhs f(x * y + one());
    OdeRhs fid = transform_ode(AffineElement::identity(), f);
    CHECK(is_zero(fid.f - f.f));

    // constant slope straightened by the shear Y = y - cx
    Expr c = num(3L);
    AffineElement shear({{one(), zero()}, {-c, one()}}, {zero(), zero()});
    OdeRhs fs = transform_ode(shear, OdeRhs(c));
    CHECK(is_zero(fs.f));

    // swapping axes maps y/x to itself
    AffineElement swap({{zero(), one()}, {one(), zero()}}, {zero(), zero()});
    OdeRhs fy = transform_ode(swap, OdeRhs(y / x));
    CHECK(is_zero(fy.f - y / x));

    // involutive under the inverse
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 6; ++i) {
        AffineElement g = random_affine(rng);
        OdeRhs base(x * x - y);
        OdeRhs there = transform_ode(g, base);
        OdeRhs back = transform_ode(inverse(g), there);
        CHECK(is_zero(back.f - base.f));
    }

    // group action: transform(compose(g,h), f) = transform(g, transform(h, f))
    for (int i = 0; i < 6; ++i) {
        AffineElement g = random_affine(rng), h = random_affine(rng);
        OdeRhs base(y * y + x);
        OdeRhs lhs = transform_ode(compose(g, h), base);
        OdeRhs rhs = transform_ode(g, transform_ode(h, base));
        CHECK(is_zero(lhs.f - rhs.f));
    }

    // slope blow-up: the first row annihilates the direction field of y' = 1
    AffineElement skew({{one(), num(-1L)}, {one(), zero()}}, {zero(), zero()});
    CHECK_THROWS_AS(transform_ode(skew, OdeRhs(one())), SingularError);

    // assumption ledger carries the nonvanishing condition
    Assumptions asmp;
    AffineElement rot({{zero(), num(-1L)}, {one(), zero()}}, {zero(), zero()});
    transform_ode(rot, OdeRhs(x), &asmp);
    CHECK_FALSE(asmp.nonzero.empty());
}

TEST_CASE("left invariance of the coframe") {
    // pull back each w_i along L_g with symbolic g entries
    ExprMat lin = {{sym("g_3"), sym("g_4")}, {sym("g_5"), sym("g_6")}};
    ExprVec tr = {sym("g_1"), sym("g_2")};
    AffineElement g(std::move(lin), std::move(tr));
    ChartMap lg = left_translation(g);
    auto w = maurer_cartan_coframe();
    for (const auto& wi : w) {
        Form pulled = pullback(lg, wi);
        CHECK(form_vanishes(pulled - wi));
    }
}
