#include <catch2/catch_amalgamated.hpp>

#include "eds/form.hpp"
#include "eds/formparse.hpp"

#include "generators.hpp"

using namespace eds;

namespace {

const Chart r4{"R4", {"x", "y", "z", "p"}};

Form random_form(testgen::ExprGen& gen, const Chart& ch, int degree, int terms) {
    Form f = Form::zero_form(ch, degree);
    std::uniform_int_distribution<int> idx(0, ch.dim() - 1);
    for (int t = 0; t < terms; ++t) {
        IndexTuple tup;
        for (int k = 0; k < degree; ++k) tup.push_back(idx(gen.rng));
        f.accumulate(tup, gen.gen(2));
    }
    return f.prune();
}

bool form_vanishes(const Form& f) {
    Form g = f;
    return g.prune().is_structurally_zero();
}

} // namespace

TEST_CASE("wedge basics") {
    Form dx = Form::differential(r4, "x");
    Form dy = Form::differential(r4, "y");
    Form dp = Form::differential(r4, "p");
    Expr p = sym("p");

    // dp ^ (dx + 2p dy) = dp^dx + 2p dp^dy
    Form rhs = parse_form("dx + 2*p*dy", r4);
    Form w = wedge(dp, rhs);
    Form expected = Form::zero_form(r4, 2);
    expected.accumulate({3, 0}, one());        // dp^dx
    expected.accumulate({3, 1}, 2L * p);       // 2p dp^dy
    CHECK(form_vanishes(w - expected));

    CHECK(form_vanishes(wedge(dx, dx)));
    CHECK(form_vanishes(wedge(dx, dy) + wedge(dy, dx)));
}

TEST_CASE("exterior derivative of the contact form") {
    // theta = dz + p dx + p^2 dy; dtheta = dp^(dx + 2p dy)
    Form theta = parse_form("dz + p*dx + p^2*dy", r4);
    Form dtheta = exterior_derivative(theta);
    Form expected = wedge(Form::differential(r4, "p"), parse_form("dx + 2*p*dy", r4));
    CHECK(form_vanishes(dtheta - expected));

    // d(du1 - u2 du3) = -du2 ^ du3 for functions u_i
    Expr x = sym("x"), y = sym("y"), z = sym("z"), p = sym("p");
    Expr u1 = z + x * p + y * p * p, u2 = x + 2L * y * p, u3 = p;
    auto d_of = [&](const Expr& h) {
        Form f = Form::zero_form(r4, 1);
        for (int v = 0; v < r4.dim(); ++v)
            f.accumulate({v}, differentiate(h, r4.coords[static_cast<std::size_t>(v)]));
        return f.prune();
    };
    Form w = d_of(u1) - u2 * d_of(u3);
    Form dw = exterior_derivative(w);
    Form expect = num(-1L) * wedge(d_of(u2), d_of(u3));
    CHECK(form_vanishes(dw - expect));
}

TEST_CASE("pullback of the M0 section realizes w2 = dy - f dx") {
    Chart a2{"A2", {"x_1", "x_2", "x_3", "x_4", "x_5", "x_6"}};
    Chart plane{"plane", {"x", "y"}};
    Expr f = sym("y") / sym("x"); // any f(x,y); here y/x
    ChartMap section(plane, a2, {sym("x"), sym("y"), one(), zero(), f, one()});

    Expr D = parse("x_3*x_6 - x_4*x_5");
    Form w2 = Form::zero_form(a2, 1);
    w2.accumulate({1}, sym("x_3") / D);
    w2.accumulate({0}, -(sym("x_5") / D));

    Form pulled = pullback(section, w2);
    Form expected = Form::zero_form(plane, 1);
    expected.accumulate({1}, one());
    expected.accumulate({0}, -f);
    CHECK(form_vanishes(pulled - expected));

    // pullback along the identity is the identity
    Form theta = parse_form("dz + p*dx + p^2*dy", r4);
    CHECK(form_vanishes(pullback(ChartMap::identity(r4), theta) - theta));

    // constants pull back unchanged
    Form c = Form::function(a2, num(7L));
    Form cp = pullback(section, c);
    CHECK(equal(cp.coefficient({}), num(7L)));
}

TEST_CASE("interior product") {
    Form dpdx = wedge(Form::differential(r4, "p"), Form::differential(r4, "x"));
    VectorField ddp = VectorField::coordinate(r4, "p");
    VectorField ddy = VectorField::coordinate(r4, "y");

    Form r = interior_product(ddp, dpdx);
    CHECK(form_vanishes(r - Form::differential(r4, "x")));
    CHECK(form_vanishes(interior_product(ddy, dpdx)));

    // antiderivation on df: i_X(df) = X(f)
    Expr fx = sym("x") * sym("p") + sym("y");
    Form df = exterior_derivative(Form::function(r4, fx));
    Form contracted = interior_product(ddp, df);
    CHECK(is_zero(contracted.coefficient({}) - sym("x")));
}

TEST_CASE("express_in_coframe") {
    Form dx = Form::differential(r4, "x");
    Form dy = Form::differential(r4, "y");
    Form dz = Form::differential(r4, "z");
    Form dp = Form::differential(r4, "p");
    Expr p = sym("p");

    std::vector<Form> coframe = {dp, parse_form("dx + 2*p*dy", r4),
                                 parse_form("dz + p*dx + p^2*dy", r4), dy};
    // w2 of the coframe expressed in itself
    ExprVec c = express_in_coframe(coframe[1], coframe);
    CHECK(is_zero(c[0]));
    CHECK(is_zero(c[1] - one()));
    CHECK(is_zero(c[2]));
    CHECK(is_zero(c[3]));

    // dx = (dx + 2p dy) - 2p dy
    ExprVec cx = express_in_coframe(dx, coframe);
    CHECK(is_zero(cx[1] - one()));
    CHECK(is_zero(cx[3] + 2L * p));

    // a dependent list is rejected
    std::vector<Form> dep = {dx, dy, dx + dy, dz};
    CHECK_THROWS_AS(express_in_coframe(dp, dep), SingularError);
}

TEST_CASE("coframe basis round trip") {
    Expr p = sym("p");
    std::vector<Form> coframe = {Form::differential(r4, "p"), parse_form("dx + 2*p*dy", r4),
                                 parse_form("dz + p*dx + p^2*dy", r4), Form::differential(r4, "y")};
    CoframeBasis basis(coframe, {"w1", "w2", "w3", "w4"});

    testgen::ExprGen gen(333, {"x", "y", "z", "p"}, true);
    for (int i = 0; i < 5; ++i) {
        Form f = random_form(gen, r4, 2, 4);
        Form rt = basis.from_basis(basis.to_basis(f));
        CHECK(form_vanishes(rt - f));
    }
}

TEST_CASE("d o d = 0 on random forms") {
    Chart r6{"R6", {"x1", "x2", "x3", "x4", "x5", "x6"}};
    testgen::ExprGen gen(8181, {"x1", "x2", "x3", "x4", "x5", "x6"}, true);
    for (int deg = 0; deg <= 3; ++deg) {
        for (int i = 0; i < 4; ++i) {
            Form f = random_form(gen, r6, deg, 3);
            CHECK(form_vanishes(exterior_derivative(exterior_derivative(f))));
        }
    }
}

TEST_CASE("graded Leibniz identity on random forms") {
    testgen::ExprGen gen(606, {"x", "y", "z", "p"}, true);
    for (int da = 0; da <= 2; ++da)
        for (int db = 0; db <= 1; ++db)
            for (int i = 0; i < 3; ++i) {
                Form a = random_form(gen, r4, da, 3);
                Form b = random_form(gen, r4, db, 3);
                Form lhs = exterior_derivative(wedge_or_scale(a, b));
                Form rhs = wedge_or_scale(exterior_derivative(a), b) +
                           (da % 2 == 0 ? one() : num(-1L)) * wedge_or_scale(a, exterior_derivative(b));
                CHECK(form_vanishes(lhs - rhs));
            }
}

TEST_CASE("pullback commutes with d") {
    Chart src{"src", {"u", "v"}};
    testgen::ExprGen gen(99, {"u", "v"}, true);
    for (int i = 0; i < 6; ++i) {
        std::vector<Expr> comps;
        for (int j = 0; j < 4; ++j) comps.push_back(gen.gen(2));
        ChartMap phi(src, r4, comps);
        testgen::ExprGen fgen(1000 + static_cast<std::uint64_t>(i), {"x", "y", "z", "p"}, true);
        for (int deg = 0; deg <= 2; ++deg) {
            Form f = random_form(fgen, r4, deg, 3);
            Form lhs = pullback(phi, exterior_derivative(f));
            Form rhs = exterior_derivative(pullback(phi, f));
            CHECK(form_vanishes(lhs - rhs));
        }
    }
}

TEST_CASE("interior product is a graded antiderivation") {
    testgen::ExprGen gen(2024, {"x", "y", "z", "p"}, true);
    for (int i = 0; i < 6; ++i) {
        std::vector<Expr> comps;
        for (int j = 0; j < 4; ++j) comps.push_back(gen.gen(2));
        VectorField X(r4, comps);
        Form a = random_form(gen, r4, 1, 3);
        Form b = random_form(gen, r4, 2, 3);
        Form lhs = interior_product(X, wedge(a, b));
        Form rhs = wedge_or_scale(interior_product(X, a), b) -
                   wedge_or_scale(a, interior_product(X, b));
        CHECK(form_vanishes(lhs - rhs));
    }
}

TEST_CASE("form parsing and printing") {
    Form theta = parse_form("dz + p*dx + p^2*dy", r4);
    CHECK(theta.degree == 1);
    Form back = parse_form(to_string(theta), r4);
    CHECK(form_vanishes(back - theta));

    Form w = parse_form("[dp]^[dx + 2*p*dy]", r4);
    CHECK(w.degree == 2);
    Form expect = wedge(Form::differential(r4, "p"), parse_form("dx + 2*p*dy", r4));
    CHECK(form_vanishes(w - expect));
    Form back2 = parse_form(to_string(w), r4);
    CHECK(form_vanishes(back2 - w));

    CHECK_THROWS_AS(parse_form("dx * dy", r4), SyntaxError);
    CHECK_THROWS_AS(parse_form("dx + p", r4), Error);

    // chart mismatch raises
    Chart other{"other", {"u", "v"}};
    CHECK_THROWS_AS(wedge(Form::differential(other, "u"), Form::differential(r4, "x")),
                    ChartError);
}
