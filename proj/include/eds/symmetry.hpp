#ifndef EDS_SYMMETRY_HPP
#define EDS_SYMMETRY_HPP

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eds/affine.hpp"

namespace eds {

/// Infinitesimal affine map xi d/dx + eta d/dy with
///   xi = a1 + a3 x + a4 y,   eta = a2 + a5 x + a6 y.
/// The component order (a1..a6) matches the A(2,R) chart x_1..x_6.
struct AffineVectorField {
    std::array<Expr, 6> alpha;

    AffineVectorField() : alpha{zero(), zero(), zero(), zero(), zero(), zero()} {}
    explicit AffineVectorField(std::array<Expr, 6> a) : alpha(std::move(a)) {}

    static AffineVectorField from_rationals(const std::array<Rational, 6>& v) {
        AffineVectorField r;
        for (int i = 0; i < 6; ++i) r.alpha[static_cast<std::size_t>(i)] = num(v[static_cast<std::size_t>(i)]);
        return r;
    }

    Expr xi() const { return alpha[0] + alpha[2] * sym("x") + alpha[3] * sym("y"); }
    Expr eta() const { return alpha[1] + alpha[4] * sym("x") + alpha[5] * sym("y"); }

    /// 3x3 matrix of the affine Lie algebra: ((a3 a4 a1) (a5 a6 a2) (0 0 0)).
    ExprMat matrix() const {
        return {{alpha[2], alpha[3], alpha[0]},
                {alpha[4], alpha[5], alpha[1]},
                {zero(), zero(), zero()}};
    }

    static AffineVectorField from_matrix(const ExprMat& m) {
        AffineVectorField r;
        r.alpha = {m[0][2], m[1][2], m[0][0], m[0][1], m[1][0], m[1][1]};
        return r;
    }
};

/// Commutator of two affine fields, again affine.
inline AffineVectorField bracket(const AffineVectorField& v, const AffineVectorField& w) {
    Expr x = sym("x"), y = sym("y");
    auto act = [&](const AffineVectorField& a, const Expr& h) {
        return a.xi() * differentiate(h, "x") + a.eta() * differentiate(h, "y");
    };
    Expr bxi = act(v, w.xi()) - act(w, v.xi());
    Expr beta = act(v, w.eta()) - act(w, v.eta());
    AffineVectorField r;
    std::map<std::string, Expr> origin = {{"x", zero()}, {"y", zero()}};
    r.alpha = {substitute(bxi, origin), substitute(beta, origin),
               differentiate(bxi, "x"),  differentiate(bxi, "y"),
               differentiate(beta, "x"), differentiate(beta, "y")};
    return r;
}

/// Linear determining residual of the affine symmetry condition:
///   R = eta_x + (eta_y - xi_x) f - xi_y f^2 - xi f_x - eta f_y.
/// R vanishes identically iff v generates a one-parameter affine symmetry
/// group of y' = f(x,y).
inline Expr determining_residual(const OdeRhs& ode, const AffineVectorField& v) {
    const Expr& f = ode.f;
    Expr fx = differentiate(f, "x");
    Expr fy = differentiate(f, "y");
    Expr xi = v.xi(), eta = v.eta();
    Expr xi_x = differentiate(xi, "x"), xi_y = differentiate(xi, "y");
    Expr eta_x = differentiate(eta, "x"), eta_y = differentiate(eta, "y");
    return eta_x + (eta_y - xi_x) * f - xi_y * f * f - xi * fx - eta * fy;
}

/// Coefficient functions h_i with R = sum_i alpha_i h_i.
inline std::array<Expr, 6> residual_coefficients(const OdeRhs& ode) {
    const Expr& f = ode.f;
    Expr x = sym("x"), y = sym("y");
    Expr fx = differentiate(f, "x");
    Expr fy = differentiate(f, "y");
    return {
        -fx,                    // a1
        -fy,                    // a2
        -f - x * fx,            // a3
        -(f * f) - y * fx,      // a4
        one() - x * fy,         // a5
        f - y * fy,             // a6
    };
}

struct SymmetryOptions {
    int sample_points = 12;
    double rank_tolerance = 1e-8;
    std::uint64_t seed = 0xED500002ULL;
    int max_draws = 4000;
    ZeroOptions zero = default_zero_options();
};

/// Basis of the affine symmetry algebra of an ODE, with the path that
/// produced it.  The symbolic path solves the monomial-matched linear system
/// exactly and runs whenever no fractional-power kernel appears; the
/// numerical path estimates the rank of the sampled coefficient matrix and
/// always runs.  Their dimensions must agree when both run.
struct SymmetryAlgebra {
    std::vector<AffineVectorField> basis;
    int dimension = 0;
    std::string path; // "symbolic+numeric", "numeric"
};

namespace detail {

inline bool has_surd_kernel(const std::array<Expr, 6>& hs) {
    for (const auto& h : hs) {
        AtomTable t = atom_table(h);
        for (const auto& a : t.atoms)
            if (a->kind == Kind::Power) return true; // fractional power kernel
    }
    return false;
}

/// Exact nullspace of sum_i alpha_i h_i = 0 by matching monomials over a
/// common denominator; sound, and complete when the kernel monomials are
/// linearly independent functions.
inline std::vector<std::array<Rational, 6>> symbolic_nullspace(const std::array<Expr, 6>& hs) {
    AtomTable table = atom_table(std::vector<Expr>(hs.begin(), hs.end()));
    std::vector<RatFun> fs;
    for (const auto& h : hs) fs.push_back(to_ratfun(h, table));
    std::vector<std::pair<Poly, int>> lcd;
    for (const auto& f : fs)
        for (const auto& [fac, mult] : f.den) {
            bool found = false;
            for (auto& [g, mg] : lcd)
                if (g == fac) {
                    mg = std::max(mg, mult);
                    found = true;
                }
            if (!found) lcd.emplace_back(fac, mult);
        }
    std::map<Monomial, std::size_t> mono_index;
    std::array<Poly, 6> cleared;
    for (std::size_t i = 0; i < 6; ++i) {
        Poly q = fs[i].num;
        for (const auto& [fac, mult] : lcd) {
            int have = 0;
            for (const auto& [g, mg] : fs[i].den)
                if (g == fac) have = mg;
            for (int k = have; k < mult; ++k) q = q * fac;
        }
        for (const auto& [mon, c] : q.terms) mono_index.emplace(mon, mono_index.size());
        cleared[i] = std::move(q);
    }
    RatMat rows(mono_index.size(), RatVec(6, Rational(0)));
    for (std::size_t i = 0; i < 6; ++i)
        for (const auto& [mon, c] : cleared[i].terms) rows[mono_index[mon]][i] = c;
    if (rows.empty()) rows.push_back(RatVec(6, Rational(0)));
    std::vector<std::array<Rational, 6>> out;
    for (const auto& v : rat_nullspace(rows)) {
        std::array<Rational, 6> a;
        for (int i = 0; i < 6; ++i) a[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
        out.push_back(std::move(a));
    }
    return out;
}

/// Sampled coefficient matrix; draws from the rational grid [1/2, 3] and
/// rejects points outside the domain of any coefficient.
inline Eigen::MatrixXd sampled_matrix(const std::array<Expr, 6>& hs, const SymmetryOptions& opts) {
    Eigen::MatrixXd m(opts.sample_points, 6);
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> grid(8, 48);
    int row = 0;
    for (int attempt = 0; attempt < opts.max_draws && row < opts.sample_points; ++attempt) {
        Point pt = Point::of({{"x", Rational(grid(rng), 16)}, {"y", Rational(grid(rng), 16)}});
        try {
            std::array<double, 6> vals;
            for (std::size_t i = 0; i < 6; ++i) vals[i] = evaluate_double(hs[i], pt);
            for (std::size_t i = 0; i < 6; ++i) m(row, static_cast<int>(i)) = vals[i];
            ++row;
        } catch (const DomainError&) {
            continue;
        }
    }
    if (row < opts.sample_points)
        throw IndeterminateError("could not sample the domain of the determining equation");
    return m;
}

/// Columns are rescaled to unit max magnitude first; rank is invariant and
/// the relative tolerance then treats slow and fast-growing coefficients
/// alike (a column of e^(x^3) values must not drown a column of ones).
inline Eigen::MatrixXd column_scaled(Eigen::MatrixXd m) {
    for (int c = 0; c < m.cols(); ++c) {
        double s = m.col(c).cwiseAbs().maxCoeff();
        if (s > 0) m.col(c) /= s;
    }
    return m;
}

inline int numeric_nullity(const Eigen::MatrixXd& m, double tol) {
    Eigen::MatrixXd scaled = column_scaled(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 6;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return 6 - rank;
}

/// Best rational approximation with denominator <= qmax (continued fractions).
inline Rational rationalize(double v, long qmax) {
    bool neg = v < 0;
    double x = std::fabs(v);
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = x;
    for (int it = 0; it < 32; ++it) {
        long a = static_cast<long>(std::floor(frac));
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > qmax) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - static_cast<double>(a);
        if (rem < 1e-12) break;
        frac = 1.0 / rem;
    }
    Rational r(p1, q1 == 0 ? 1 : q1);
    return neg ? -r : r;
}

} // namespace detail

inline SymmetryAlgebra symmetry_algebra(const OdeRhs& ode,
                                        const SymmetryOptions& opts = SymmetryOptions{}) {
    std::array<Expr, 6> hs = residual_coefficients(ode);

    // numerical rank oracle (always runs; it is the arbiter for surd cases)
    Eigen::MatrixXd m = detail::sampled_matrix(hs, opts);
    int dim_numeric = detail::numeric_nullity(m, opts.rank_tolerance);

    SymmetryAlgebra out;
    bool symbolic_ok = !detail::has_surd_kernel(hs);
    if (symbolic_ok) {
        auto null = detail::symbolic_nullspace(hs);
        // soundness check: every symbolic solution annihilates the residual
        for (const auto& a : null) {
            AffineVectorField v = AffineVectorField::from_rationals(a);
            if (!is_zero(determining_residual(ode, v), opts.zero))
                throw Error("symbolic symmetry solution failed verification");
        }
        int dim_symbolic = static_cast<int>(null.size());
        if (dim_symbolic != dim_numeric)
            throw DisagreementError("symbolic and numerical symmetry dimensions disagree",
                                    dim_symbolic, dim_numeric);
        for (const auto& a : null) out.basis.push_back(AffineVectorField::from_rationals(a));
        out.dimension = dim_symbolic;
        out.path = "symbolic+numeric";
        return out;
    }

    out.dimension = dim_numeric;
    out.path = "numeric";
    // try to recover an exact basis from the SVD nullspace of the scaled
    // matrix (null vectors transform by the column scales); keep only
    // vectors that verify against the residual
    Eigen::VectorXd col_scale(6);
    for (int c = 0; c < 6; ++c) {
        double s = m.col(c).cwiseAbs().maxCoeff();
        col_scale(c) = s > 0 ? s : 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::column_scaled(m), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    std::vector<AffineVectorField> verified;
    for (int c = 0; c < 6; ++c) {
        bool in_null = c >= sv.size() || smax == 0.0 || sv(c) <= opts.rank_tolerance * smax;
        if (!in_null) continue;
        Eigen::VectorXd col = svd.matrixV().col(c);
        for (int i = 0; i < 6; ++i) col(i) /= col_scale(i);
        double scale = col.cwiseAbs().maxCoeff();
        if (scale == 0.0) continue;
        std::array<Rational, 6> a;
        for (int i = 0; i < 6; ++i)
            a[static_cast<std::size_t>(i)] = detail::rationalize(col(i) / scale, 48);
        AffineVectorField v = AffineVectorField::from_rationals(a);
        try {
            if (is_zero(determining_residual(ode, v), opts.zero)) verified.push_back(v);
        } catch (const IndeterminateError&) {
        }
    }
    if (static_cast<int>(verified.size()) == dim_numeric) out.basis = std::move(verified);
    return out;
}

/// Transport of a symmetry algebra along g: each generator matrix conjugates
/// to g m g^{-1}, matching the pushforward convention of transform_ode, so
/// that symmetry_algebra(transform_ode(g, f)) and
/// conjugate_algebra(g, symmetry_algebra(f)) agree as subspaces.
inline SymmetryAlgebra conjugate_algebra(const AffineElement& g, const SymmetryAlgebra& alg) {
    ExprMat m3 = {{g.linear[0][0], g.linear[0][1], g.translation[0]},
                  {g.linear[1][0], g.linear[1][1], g.translation[1]},
                  {zero(), zero(), one()}};
    AffineElement gi = inverse(g);
    ExprMat m3i = {{gi.linear[0][0], gi.linear[0][1], gi.translation[0]},
                   {gi.linear[1][0], gi.linear[1][1], gi.translation[1]},
                   {zero(), zero(), one()}};
    SymmetryAlgebra out;
    out.dimension = alg.dimension;
    out.path = alg.path;
    for (const auto& v : alg.basis) {
        ExprMat conj = mat_mul(mat_mul(m3, v.matrix()), m3i);
        out.basis.push_back(AffineVectorField::from_matrix(conj));
    }
    return out;
}

/// Subspace equality of two algebras via ranks of stacked rational
/// coefficient matrices.
inline bool same_span(const SymmetryAlgebra& a, const SymmetryAlgebra& b,
                      const ZeroOptions& opts = default_zero_options()) {
    auto to_rows = [&](const SymmetryAlgebra& s) {
        ExprMat m;
        for (const auto& v : s.basis) {
            ExprVec row(v.alpha.begin(), v.alpha.end());
            m.push_back(std::move(row));
        }
        return m;
    };
    ExprMat ma = to_rows(a), mb = to_rows(b);
    if (ma.empty() || mb.empty()) return ma.empty() == mb.empty();
    ExprMat stacked = ma;
    stacked.insert(stacked.end(), mb.begin(), mb.end());
    int ra = sym_rank(ma, nullptr, opts);
    int rb = sym_rank(mb, nullptr, opts);
    int rs = sym_rank(stacked, nullptr, opts);
    return ra == rb && rb == rs;
}

} // namespace eds

#endif
