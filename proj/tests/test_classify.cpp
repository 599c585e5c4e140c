#include <catch2/catch_amalgamated.hpp>

#include "eds/classify.hpp"
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

TEST_CASE("m0 section") {
    Expr x = sym("x"), y = sym("y");
    OdeRhs ode(y / x + x);
    ChartMap sec = m0_section(ode);

    // defining equation pulls back to zero
    Expr pulled = sec.pull_scalar(sym("x_5")) - sec.pull_scalar(sym("x_3")) * ode.f;
    CHECK(is_zero(pulled));

    // the determinant pulls back to 1
    CHECK(is_zero(sec.pull_scalar(parse("x_3*x_6 - x_4*x_5")) - one()));

    // w2 pulls back to dy - f dx
    auto w = maurer_cartan_coframe();
    Form w2 = pullback(sec, w[1]);
    Form expected = Form::zero_form(plane_chart(), 1);
    expected.accumulate({1}, one());
    expected.accumulate({0}, -ode.f);
    CHECK(form_vanishes(w2 - expected));
}

TEST_CASE("base invariants") {
    Expr x = sym("x"), y = sym("y");

    BaseInvariants b1 = base_invariants(OdeRhs(y / x));
    CHECK(is_zero(b1.a));
    CHECK(is_zero(b1.b - pow(x, Rational(-1))));

    BaseInvariants b2 = base_invariants(OdeRhs(num(5L)));
    CHECK(is_zero(b2.a));
    CHECK(is_zero(b2.b));

    BaseInvariants b3 = base_invariants(OdeRhs(x));
    CHECK(is_zero(b3.a - one()));
    CHECK(is_zero(b3.b));
}

TEST_CASE("case-I criterion equals f_x + f f_y = 0") {
    testgen::ExprGen gen(515, {"x", "y"}, true);
    for (int i = 0; i < 12; ++i) {
        Expr f = gen.gen(2);
        Expr direct = differentiate(f, "x") + f * differentiate(f, "y");
        bool a_zero;
        try {
            a_zero = is_zero(base_invariants(OdeRhs(f)).a);
        } catch (const SingularError&) {
            continue; // degenerate draw (w1, w2 dependent on the section)
        }
        CHECK(a_zero == is_zero(direct));
    }
}

TEST_CASE("case2 invariants") {
    Expr x = sym("x"), y = sym("y");

    ReducedInvariants r1 = case2_invariants(OdeRhs(x));
    CHECK(r1.u1_zero);
    CHECK(r1.u2_zero);
    CHECK(r1.u3_zero);

    ReducedInvariants r2 = case2_invariants(OdeRhs(exp_e(x)));
    CHECK_FALSE(r2.u1_zero);
    CHECK(r2.u2_zero);
    CHECK(r2.u3_zero);

    ReducedInvariants r3 = case2_invariants(OdeRhs(-(x / y)));
    CHECK(r3.u1_zero);
    CHECK_FALSE(r3.u2_zero);
    CHECK(r3.u3_zero);

    // requesting the case-II pipeline for a case-I equation is a conflict
    CHECK_THROWS_AS(case2_invariants(OdeRhs(y / x)), ConflictError);
}

TEST_CASE("classification of the corpus") {
    Expr x = sym("x"), y = sym("y");
    struct Row {
        Expr f;
        CaseLabel label;
        int dim;
        Expr standard;
        bool expect_witness;
    };
    std::vector<Row> rows = {
        {num(3L), CaseLabel::I_1, 5, zero(), true},
        {(y + 2L) / (x + 1L), CaseLabel::I_2_1, 4, y / x, true},
        {x, CaseLabel::II_1, 3, x, true},
        {exp_e(x), CaseLabel::II_2, 2, exp_e(x), false},
        {-(x / y), CaseLabel::II_3_1, 2, -(x / y), false},
        {-(y / x), CaseLabel::II_3_2, 2, -(y / x), false},
        {y / x + pow(x, Rational(4)), CaseLabel::II_5, 2, y / x + pow(x, Rational(4)), false},
        {y / x + x, CaseLabel::II_6, 2, y / x + x, false},
        {y / x + pow(x, Rational(3)), CaseLabel::II_8, 2, y / x + pow(x, Rational(3)), false},
    };
    for (const auto& row : rows) {
        INFO(to_string(row.f));
        ClassificationResult r = classify(OdeRhs(row.f));
        CHECK(r.label == row.label);
        CHECK(r.dimension == row.dim);
        CHECK(is_zero(r.standard_form.f - row.standard));
        CHECK(r.witness.has_value() == row.expect_witness);
        if (r.witness) {
            OdeRhs moved = transform_ode(*r.witness, OdeRhs(row.f));
            CHECK(is_zero(moved.f - r.standard_form.f));
        }
    }
}

TEST_CASE("classification of further standard representatives") {
    Expr x = sym("x"), y = sym("y");

    // the Clairaut representative sits in I.2.2 with the numeric path
    ClassificationResult c = classify(OdeRhs(x - sqrt_e(x * x - 2L * y)));
    CHECK(c.label == CaseLabel::I_2_2);
    CHECK(c.dimension == 2);
    CHECK(c.symmetry_path == "numeric");

    // log x and negative powers land in II.2 with themselves as standard form
    ClassificationResult l = classify(OdeRhs(log_e(x)));
    CHECK(l.label == CaseLabel::II_2);
    CHECK(is_zero(l.standard_form.f - log_e(x)));

    ClassificationResult p = classify(OdeRhs(pow(x, Rational(-2))));
    CHECK(p.label == CaseLabel::II_2);
    CHECK(is_zero(p.standard_form.f - pow(x, Rational(-2))));

    // the rational family with u3 = 0
    ClassificationResult q = classify(OdeRhs((-2L * x + 4L * y) / (6L * y)));
    CHECK(q.label == CaseLabel::II_7);
    CHECK(q.dimension == 2);
    CHECK(q.interpretive_choice);
    // its standard form classifies to itself (fixed point of the dispatch)
    ClassificationResult q2 = classify(q.standard_form);
    CHECK(q2.label == CaseLabel::II_7);
    CHECK(is_zero(q2.standard_form.f - q.standard_form.f));

    // a one-dimensional example matching a table row
    ClassificationResult t = classify(OdeRhs(y * (y * exp_e(-x))));
    CHECK(t.label == CaseLabel::TableRow);
    CHECK(t.table_row == 3);
    CHECK(t.dimension == 1);

    // no affine symmetry at all
    ClassificationResult u = classify(OdeRhs(pow(y, Rational(3)) + exp_e(x * x * x)));
    CHECK(u.label == CaseLabel::Unclassified);
    CHECK(u.dimension == 0);
}

TEST_CASE("affine invariance of the classification") {
    Expr x = sym("x"), y = sym("y");
    std::vector<Expr> corpus = {num(3L), (y + 2L) / (x + 1L), x, -(y / x),
                                y / x + pow(x, Rational(4))};
    std::mt19937_64 rng(60601);
    for (const Expr& f : corpus) {
        ClassificationResult before = classify(OdeRhs(f));
        int done = 0;
        while (done < 2) {
            AffineElement g = random_affine(rng);
            OdeRhs moved(zero());
            try {
                moved = transform_ode(g, OdeRhs(f));
            } catch (const SingularError&) {
                continue;
            }
            INFO(to_string(f) << " via g -> " << to_string(moved.f));
            ClassificationResult after = classify(moved);
            CHECK(after.case_name() == before.case_name());
            CHECK(after.dimension == before.dimension);
            CHECK(after.a_zero == before.a_zero);
            CHECK(after.u1_zero == before.u1_zero);
            CHECK(after.u2_zero == before.u2_zero);
            CHECK(after.u3_zero == before.u3_zero);
            ++done;
        }
    }
}

TEST_CASE("table rows verify with concrete instances") {
    Expr w = sym("w");

    // rows 1..5 with two polynomial choices of F each
    CHECK(verify_table_row(1, pow(w, Rational(3))));
    CHECK(verify_table_row(1, w * w + one()));
    CHECK(verify_table_row(2, w, Rational(1), Rational(2)));
    CHECK(verify_table_row(2, w * w, Rational(2), Rational(3)));
    CHECK(verify_table_row(3, w));
    CHECK(verify_table_row(3, w * w));
    CHECK(verify_table_row(4, w));
    CHECK(verify_table_row(4, pow(w, Rational(3)) + w));
    CHECK(verify_table_row(5, w, Rational(1), Rational(1)));
    CHECK(verify_table_row(5, w * w, Rational(2), Rational(1)));
    CHECK(verify_table_row(6, w));
    CHECK(verify_table_row(6, w * w));
    // row 7 is outside the exact fragment; the check is numerical
    CHECK(verify_table_row(7, w, Rational(1), Rational(1)));
    CHECK(verify_table_row(7, 2L * w, Rational(2), Rational(1)));

    // a wrong generator-row pairing fails
    Expr x = sym("x");
    AffineVectorField wrong = table_row_generator(4, Rational(1), Rational(1));
    CHECK_FALSE(is_zero(determining_residual(OdeRhs(pow(x, Rational(3))), wrong)));

    CHECK_THROWS_AS(verify_table_row(9, w), Error);
}
