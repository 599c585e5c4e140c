#ifndef EDS_AFFINE_HPP
#define EDS_AFFINE_HPP

#include <array>
#include <utility>
#include <vector>

#include "eds/form.hpp"

namespace eds {

/// The chart of A(2,R) in the coordinates of its matrix representation:
/// linear part (x_3 x_4; x_5 x_6), translation (x_1, x_2).
inline const Chart& affine_chart() {
    static const Chart ch{"A2", {"x_1", "x_2", "x_3", "x_4", "x_5", "x_6"}};
    return ch;
}

inline const Chart& plane_chart() {
    static const Chart ch{"plane", {"x", "y"}};
    return ch;
}

/// Invertible affine map of the plane: linear part + translation.
struct AffineElement {
    ExprMat linear;      // {{a, b}, {d, e}}
    ExprVec translation; // {t1, t2}

    AffineElement(ExprMat lin, ExprVec t, const ZeroOptions& opts = default_zero_options())
        : linear(std::move(lin)), translation(std::move(t)) {
        if (linear.size() != 2 || linear[0].size() != 2 || translation.size() != 2)
            throw Error("affine element wants a 2x2 linear part and a 2-vector");
        if (is_zero(determinant(), opts))
            throw SingularError("affine element has vanishing determinant");
    }

    static AffineElement identity() {
        return AffineElement({{one(), zero()}, {zero(), one()}}, {zero(), zero()});
    }

    /// CLI order: x3 x4 x5 x6 x1 x2.
    static AffineElement from_rationals(const std::array<Rational, 6>& v) {
        return AffineElement({{num(v[0]), num(v[1])}, {num(v[2]), num(v[3])}},
                             {num(v[4]), num(v[5])});
    }

    Expr determinant() const {
        return linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
    }
};

inline AffineElement compose(const AffineElement& g, const AffineElement& h) {
    ExprMat lin = mat_mul(g.linear, h.linear);
    ExprVec t = {g.linear[0][0] * h.translation[0] + g.linear[0][1] * h.translation[1] +
                     g.translation[0],
                 g.linear[1][0] * h.translation[0] + g.linear[1][1] * h.translation[1] +
                     g.translation[1]};
    return AffineElement(std::move(lin), std::move(t));
}

inline AffineElement inverse(const AffineElement& g) {
    Expr d = g.determinant();
    ExprMat lin = {{g.linear[1][1] / d, -(g.linear[0][1] / d)},
                   {-(g.linear[1][0] / d), g.linear[0][0] / d}};
    ExprVec t = {-(lin[0][0] * g.translation[0] + lin[0][1] * g.translation[1]),
                 -(lin[1][0] * g.translation[0] + lin[1][1] * g.translation[1])};
    return AffineElement(std::move(lin), std::move(t));
}

inline std::pair<Expr, Expr> apply(const AffineElement& g, const Expr& x, const Expr& y) {
    return {g.linear[0][0] * x + g.linear[0][1] * y + g.translation[0],
            g.linear[1][0] * x + g.linear[1][1] * y + g.translation[1]};
}

/// Left translation L_g as a chart map of A(2,R) onto itself; entries of g
/// may be symbolic.
inline ChartMap left_translation(const AffineElement& g) {
    const Chart& ch = affine_chart();
    Expr x1 = sym("x_1"), x2 = sym("x_2"), x3 = sym("x_3");
    Expr x4 = sym("x_4"), x5 = sym("x_5"), x6 = sym("x_6");
    const ExprMat& l = g.linear;
    std::vector<Expr> comps = {
        l[0][0] * x1 + l[0][1] * x2 + g.translation[0],
        l[1][0] * x1 + l[1][1] * x2 + g.translation[1],
        l[0][0] * x3 + l[0][1] * x5,
        l[0][0] * x4 + l[0][1] * x6,
        l[1][0] * x3 + l[1][1] * x5,
        l[1][0] * x4 + l[1][1] * x6,
    };
    return ChartMap(ch, ch, std::move(comps));
}

/// The six invariant 1-forms of A(2,R):
///   w1 = (x6 dx1 - x4 dx2)/D     w2 = (x3 dx2 - x5 dx1)/D
///   w3 = (x6 dx3 - x4 dx5)/D     w4 = (x6 dx4 - x4 dx6)/D
///   w5 = (x3 dx5 - x5 dx3)/D     w6 = (x3 dx6 - x5 dx4)/D
/// with D = x3 x6 - x4 x5.
inline std::vector<Form> maurer_cartan_coframe() {
    const Chart& ch = affine_chart();
    Expr x3 = sym("x_3"), x4 = sym("x_4"), x5 = sym("x_5"), x6 = sym("x_6");
    Expr invd = pow(x3 * x6 - x4 * x5, Rational(-1));
    auto mk = [&](const Expr& ca, int ia, const Expr& cb, int ib) {
        Form f = Form::zero_form(ch, 1);
        f.accumulate({ia}, ca * invd);
        f.accumulate({ib}, -(cb * invd));
        return f;
    };
    return {
        mk(x6, 0, x4, 1), // w1
        mk(x3, 1, x5, 0), // w2
        mk(x6, 2, x4, 4), // w3
        mk(x6, 3, x4, 5), // w4
        mk(x3, 4, x5, 2), // w5
        mk(x3, 5, x5, 3), // w6
    };
}

/// Right-hand sides of the structure equations
///   dw1 = w1^w3 + w2^w4      dw2 = w1^w5 + w2^w6
///   dw3 = -w4^w5             dw4 = -w3^w4 - w4^w6
///   dw5 = w3^w5 + w5^w6      dw6 = w4^w5
inline std::vector<Form> structure_equation_rhs(const std::vector<Form>& w) {
    return {
        wedge(w[0], w[2]) + wedge(w[1], w[3]),
        wedge(w[0], w[4]) + wedge(w[1], w[5]),
        num(-1L) * wedge(w[3], w[4]),
        num(-1L) * wedge(w[2], w[3]) - wedge(w[3], w[5]),
        wedge(w[2], w[4]) + wedge(w[4], w[5]),
        wedge(w[3], w[4]),
    };
}

struct StructureCheck {
    bool ok = true;
    std::vector<Form> residuals;
};

inline StructureCheck verify_structure_equations(const std::vector<Form>& w,
                                                 const ZeroOptions& opts = default_zero_options()) {
    if (w.size() != 6) throw Error("structure equations expect six 1-forms");
    StructureCheck out;
    std::vector<Form> rhs = structure_equation_rhs(w);
    for (std::size_t i = 0; i < 6; ++i) {
        Form r = exterior_derivative(w[i]) - rhs[i];
        r.prune(opts);
        if (!r.is_structurally_zero()) out.ok = false;
        out.residuals.push_back(std::move(r));
    }
    return out;
}

/// Admissible change of the invariant basis, three constants with a'c' != 0:
///   w1' = a'w1 + b'w2          w2' = c'w2
///   w3' = w3 + (b'/a')w5       w5' = (c'/a')w5
///   w4' = (a'/c')w4 - (b'/c')w3 - (b'^2/(a'c'))w5 + (b'/c')w6
///   w6' = w6 - (b'/a')w5
struct BasisChange {
    Rational a, b, c;

    BasisChange(Rational a_, Rational b_, Rational c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
        if (a == 0 || c == 0) throw Error("basis change requires a'c' != 0");
    }
};

inline std::vector<Form> change_basis(const std::vector<Form>& w, const BasisChange& bc) {
    if (w.size() != 6) throw Error("basis change expects six 1-forms");
    Expr a = num(bc.a), b = num(bc.b), c = num(bc.c);
    return {
        a * w[0] + b * w[1],
        c * w[1],
        w[2] + (b / a) * w[4],
        (a / c) * w[3] - (b / c) * w[2] - ((b * b) / (a * c)) * w[4] + (b / c) * w[5],
        (c / a) * w[4],
        w[5] - (b / a) * w[4],
    };
}

/// Composition of two admissible changes is again one of the family.
inline BasisChange compose(const BasisChange& first, const BasisChange& second) {
    return BasisChange(second.a * first.a, second.a * first.b + second.b * first.c,
                       second.c * first.c);
}

/// Right-hand side of a first-order ODE y' = f(x, y).
struct OdeRhs {
    Expr f;

    explicit OdeRhs(Expr e) : f(std::move(e)) {}
};

/// Push an ODE forward along g: with (X,Y) = g(x,y), graphs of solutions map
/// to graphs of solutions and ftilde(g(x,y)) = (d + e f)/(a + b f) where
/// (a b; d e) is g's linear part.  Requires a + b f not identically zero.
inline OdeRhs transform_ode(const AffineElement& g, const OdeRhs& ode,
                            Assumptions* asmp = nullptr,
                            const ZeroOptions& opts = default_zero_options()) {
    const Expr& f = ode.f;
    Expr a = g.linear[0][0], b = g.linear[0][1];
    Expr d = g.linear[1][0], e = g.linear[1][1];
    Expr den = a + b * f;
    if (is_zero(den, opts))
        throw SingularError("transformed slope blows up: the image is not a graph");
    if (asmp) asmp->require_nonzero(den);
    Expr h = (d + e * f) / den;
    AffineElement gi = inverse(g);
    auto [px, py] = apply(gi, sym("x"), sym("y"));
    Expr result = substitute(h, {{"x", px}, {"y", py}});
    return OdeRhs(ratfun_normalize(result));
}

} // namespace eds

#endif
