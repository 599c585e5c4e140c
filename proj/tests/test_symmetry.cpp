#include <catch2/catch_amalgamated.hpp>

#include "eds/parse.hpp"
#include "eds/symmetry.hpp"

#include "generators.hpp"

using namespace eds;

namespace {

AffineVectorField unit_field(int i) {
    std::array<Rational, 6> a{};
    a[static_cast<std::size_t>(i)] = 1;
    return AffineVectorField::from_rationals(a);
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

TEST_CASE("determining residual") {
    Expr x = sym("x"), y = sym("y");

    // translations in y fix any y' = F(x)
    CHECK(is_zero(determining_residual(OdeRhs(pow(x, Rational(3))), unit_field(1))));
    CHECK(is_zero(determining_residual(OdeRhs(exp_e(x)), unit_field(1))));

    // f = y F(y e^-x) with generator xi = 1, eta = y; F(s) = s and s^2
    for (const Expr& f : {y * (y * exp_e(-x)), y * pow(y * exp_e(-x), Rational(2))}) {
        AffineVectorField v = AffineVectorField::from_rationals({1, 0, 0, 0, 0, 1});
        CHECK(is_zero(determining_residual(OdeRhs(f), v)));
    }

    // f = 0 leaves R = a5
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int i = 0; i < 5; ++i) {
        std::array<Rational, 6> a;
        for (auto& e : a) e = Rational(c(rng));
        AffineVectorField v = AffineVectorField::from_rationals(a);
        Expr r = determining_residual(OdeRhs(zero()), v);
        CHECK(is_zero(r - num(a[4])));
    }
}

TEST_CASE("residual is linear in the field") {
    testgen::ExprGen gen(88, {"x", "y"}, true);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int i = 0; i < 10; ++i) {
        Expr f = gen.gen(2);
        std::array<Rational, 6> av, aw;
        for (auto& e : av) e = Rational(c(rng));
        for (auto& e : aw) e = Rational(c(rng));
        AffineVectorField v = AffineVectorField::from_rationals(av);
        AffineVectorField w = AffineVectorField::from_rationals(aw);
        std::array<Rational, 6> sum;
        for (std::size_t k = 0; k < 6; ++k) sum[k] = av[k] + aw[k];
        AffineVectorField vw = AffineVectorField::from_rationals(sum);
        OdeRhs ode(f);
        Expr lin = determining_residual(ode, vw) - determining_residual(ode, v) -
                   determining_residual(ode, w);
        CHECK(is_zero(lin));
    }
}

TEST_CASE("symmetry dimensions of the classified equations") {
    Expr x = sym("x"), y = sym("y");
    struct Row {
        Expr f;
        int dim;
        bool numeric_only;
    };
    std::vector<Row> rows = {
        {zero(), 5, false},                                    // y' = 0
        {y / x, 4, false},                                     // y' = y/x
        {x, 3, false},                                         // y' = x
        {log_e(x), 2, false},                                  // y' = log x
        {exp_e(x), 2, false},                                  // y' = e^x
        {pow(x, Rational(2)), 2, false},                       // y' = x^2
        {pow(x, Rational(3)), 2, false},                       // y' = x^3
        {pow(x, Rational(5)), 2, false},                       // y' = x^5
        {pow(x, Rational(-2)), 2, false},                      // y' = x^-2
        {-(x / y), 2, false},                                  // y' = -x/y
        {-(y / x), 2, false},                                  // y' = -y/x
        {y / x + pow(x, Rational(4)), 2, false},               // y' = y/x + x^4
        {y / x + x, 2, false},                                 // y' = y/x + x
        {x - sqrt_e(x * x - 2L * y), 2, true},                 // Clairaut representative
    };
    for (const auto& row : rows) {
        INFO(to_string(row.f));
        SymmetryAlgebra alg = symmetry_algebra(OdeRhs(row.f));
        CHECK(alg.dimension == row.dim);
        if (row.numeric_only) CHECK(alg.path == "numeric");
        else CHECK(alg.path == "symbolic+numeric");
        // every reported basis element satisfies the determining equation
        for (const auto& v : alg.basis)
            CHECK(is_zero(determining_residual(OdeRhs(row.f), v)));
    }
}

TEST_CASE("closure under the commutator") {
    Expr x = sym("x"), y = sym("y");
    for (const Expr& f : {zero(), y / x, x, -(x / y)}) {
        SymmetryAlgebra alg = symmetry_algebra(OdeRhs(f));
        for (const auto& v : alg.basis)
            for (const auto& w : alg.basis) {
                AffineVectorField b = bracket(v, w);
                SymmetryAlgebra single;
                single.basis = {b};
                single.dimension = 1;
                bool trivial = true;
                for (const auto& e : b.alpha)
                    if (!is_zero(e)) trivial = false;
                if (trivial) continue;
                ExprMat rows;
                for (const auto& u : alg.basis)
                    rows.push_back(ExprVec(u.alpha.begin(), u.alpha.end()));
                int r0 = sym_rank(rows);
                rows.push_back(ExprVec(b.alpha.begin(), b.alpha.end()));
                CHECK(sym_rank(rows) == r0);
            }
    }
}

TEST_CASE("conjugation") {
    // identity leaves the algebra alone
    SymmetryAlgebra alg = symmetry_algebra(OdeRhs(zero()));
    SymmetryAlgebra same = conjugate_algebra(AffineElement::identity(), alg);
    CHECK(same_span(alg, same));

    // the swap maps d/dy to d/dx
    AffineElement swap({{zero(), one()}, {one(), zero()}}, {zero(), zero()});
    SymmetryAlgebra dy;
    dy.basis = {unit_field(1)};
    dy.dimension = 1;
    SymmetryAlgebra conj = conjugate_algebra(swap, dy);
    REQUIRE(conj.basis.size() == 1);
    SymmetryAlgebra dx;
    dx.basis = {unit_field(0)};
    dx.dimension = 1;
    CHECK(same_span(conj, dx));

    // dimension preserved under random conjugations
    std::mt19937_64 rng(2718);
    for (int i = 0; i < 5; ++i) {
        AffineElement g = random_affine(rng);
        SymmetryAlgebra c2 = conjugate_algebra(g, alg);
        ExprMat rows;
        for (const auto& v : c2.basis) rows.push_back(ExprVec(v.alpha.begin(), v.alpha.end()));
        CHECK(sym_rank(rows) == alg.dimension);
    }
}

TEST_CASE("equivariance of the symmetry algebra") {
    Expr x = sym("x"), y = sym("y");
    std::mt19937_64 rng(1234);
    std::vector<Expr> corpus = {zero(), y / x, x, -(y / x)};
    for (const Expr& f : corpus) {
        int done = 0;
        while (done < 3) {
            AffineElement g = random_affine(rng);
            OdeRhs moved(zero());
            try {
                moved = transform_ode(g, OdeRhs(f));
            } catch (const SingularError&) {
                continue; // image is not a graph; draw another element
            }
            SymmetryAlgebra direct = symmetry_algebra(moved);
            SymmetryAlgebra transported = conjugate_algebra(g, symmetry_algebra(OdeRhs(f)));
            CHECK(direct.dimension == transported.dimension);
            CHECK(same_span(direct, transported));
            ++done;
        }
    }
}

TEST_CASE("symmetries of x^a for a sampled parameter") {
    // x^a as exp(a log x); substituting pool values {2,3,5,-2} keeps the
    // dimension at 2
    Expr x = sym("x");
    for (long a : {2L, 3L, 5L, -2L}) {
        Expr f = pow_e(x, num(a));
        SymmetryAlgebra alg = symmetry_algebra(OdeRhs(f));
        CHECK(alg.dimension == 2);
    }
}
