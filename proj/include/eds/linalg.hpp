#ifndef EDS_LINALG_HPP
#define EDS_LINALG_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eds/zero.hpp"

namespace eds {

/// Nonvanishing conditions the engine relied on (generic-point semantics).
/// Pivot choices during symbolic elimination are recorded here.
struct Assumptions {
    std::set<std::string> nonzero;

    /// Record "e != 0"; a product is nonzero iff each factor is, a power iff
    /// its base is, so entries reduce to their core factors.
    void require_nonzero(const Expr& e) {
        switch (e->kind) {
            case Kind::Number:
                return; // constants need no assumption
            case Kind::Power:
                require_nonzero(e->kids[0]);
                return;
            case Kind::Product:
                for (const auto& k : e->kids) require_nonzero(k);
                return;
            case Kind::Sum: {
                const Expr& head = e->kids[0];
                bool neg = (head->kind == Kind::Number && head->number < 0) ||
                           (head->kind == Kind::Product && head->kids[0]->kind == Kind::Number &&
                            head->kids[0]->number < 0);
                nonzero.insert(to_string(neg ? mul({num(-1L), e}) : e));
                return;
            }
            default:
                nonzero.insert(to_string(e));
        }
    }

    void merge(const Assumptions& other) {
        nonzero.insert(other.nonzero.begin(), other.nonzero.end());
    }

    std::vector<std::string> list() const { return {nonzero.begin(), nonzero.end()}; }
};

using ExprMat = std::vector<std::vector<Expr>>;
using ExprVec = std::vector<Expr>;

inline ExprMat expr_mat(std::size_t rows, std::size_t cols) {
    return ExprMat(rows, ExprVec(cols, zero()));
}

namespace detail {

struct Eliminated {
    ExprMat mat;               // row echelon, pivots scaled to 1
    std::vector<int> pivot_col; // one entry per pivot row
    int rank = 0;
};

/// Gaussian elimination over the expression field.  Pivots are validated by
/// is_zero and chosen as the syntactically smallest nonzero candidate;
/// every pivot is recorded as a nonvanishing assumption.  Entries are kept
/// in canonical rational-function form to control expression swell.
inline Eliminated eliminate(ExprMat a, Assumptions* asmp, const ZeroOptions& opts) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    Eliminated out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // smallest nonzero candidate in column c at rows >= r
        int best = -1;
        for (std::size_t i = r; i < rows; ++i) {
            if (is_zero_number(a[i][c])) continue;
            if (!is_zero(a[i][c], opts)) {
                if (best < 0 || a[i][c]->size < a[best][c]->size) best = static_cast<int>(i);
            } else {
                a[i][c] = zero();
            }
        }
        if (best < 0) continue;
        std::swap(a[r], a[static_cast<std::size_t>(best)]);
        Expr pivot = a[r][c];
        if (asmp) asmp->require_nonzero(pivot);
        for (std::size_t j = c; j < cols; ++j)
            a[r][j] = ratfun_normalize(a[r][j] / pivot);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero_number(a[i][c])) continue;
            Expr factor = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                a[i][j] = ratfun_normalize(a[i][j] - factor * a[r][j]);
        }
        out.pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    out.rank = static_cast<int>(r);
    out.mat = std::move(a);
    return out;
}

} // namespace detail

inline int sym_rank(const ExprMat& a, Assumptions* asmp = nullptr,
                    const ZeroOptions& opts = default_zero_options()) {
    return detail::eliminate(a, asmp, opts).rank;
}

/// Solve A x = b exactly.  Requires full column rank; returns nullopt when
/// the system is inconsistent at the generic point.
inline std::optional<ExprVec> solve_linear(const ExprMat& a, const ExprVec& b,
                                           Assumptions* asmp = nullptr,
                                           const ZeroOptions& opts = default_zero_options()) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    ExprMat aug = a;
    for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    auto e = detail::eliminate(std::move(aug), asmp, opts);
    // inconsistent iff a pivot lands in the augmented column
    for (std::size_t k = 0; k < e.pivot_col.size(); ++k)
        if (e.pivot_col[k] == static_cast<int>(cols)) return std::nullopt;
    if (e.rank < static_cast<int>(cols))
        throw SingularError("linear system is underdetermined at the generic point");
    ExprVec x(cols, zero());
    for (std::size_t k = 0; k < e.pivot_col.size(); ++k)
        x[static_cast<std::size_t>(e.pivot_col[k])] = e.mat[k][cols];
    return x;
}

/// Inverse of a square matrix; throws SingularError when rank drops.
inline ExprMat inverse(const ExprMat& a, Assumptions* asmp = nullptr,
                       const ZeroOptions& opts = default_zero_options()) {
    const std::size_t n = a.size();
    ExprMat aug = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? one() : zero());
    auto e = detail::eliminate(std::move(aug), asmp, opts);
    if (e.rank < static_cast<int>(n))
        throw SingularError("matrix is singular at the generic point");
    for (std::size_t k = 0; k < n; ++k)
        if (e.pivot_col[k] != static_cast<int>(k))
            throw SingularError("matrix is singular at the generic point");
    ExprMat inv(n, ExprVec(n, zero()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.mat[i][n + j];
    return inv;
}

/// Basis of the right nullspace of A over the expression field.
inline std::vector<ExprVec> nullspace(const ExprMat& a, Assumptions* asmp = nullptr,
                                      const ZeroOptions& opts = default_zero_options()) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    auto e = detail::eliminate(a, asmp, opts);
    std::vector<bool> is_pivot(cols, false);
    for (int c : e.pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<ExprVec> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        ExprVec v(cols, zero());
        v[fc] = one();
        for (std::size_t k = 0; k < e.pivot_col.size(); ++k) {
            auto pc = static_cast<std::size_t>(e.pivot_col[k]);
            v[pc] = ratfun_normalize(-e.mat[k][fc]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

inline ExprMat mat_mul(const ExprMat& a, const ExprMat& b) {
    const std::size_t n = a.size(), m = b[0].size(), k = b.size();
    ExprMat r = expr_mat(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<Expr> terms;
            for (std::size_t t = 0; t < k; ++t) terms.push_back(a[i][t] * b[t][j]);
            r[i][j] = add(std::move(terms));
        }
    return r;
}

// ---------------------------------------------------------------------------
// exact rational matrices (for systems with numeric coefficients)
// ---------------------------------------------------------------------------

using RatMat = std::vector<std::vector<Rational>>;
using RatVec = std::vector<Rational>;

inline int rat_rref(RatMat& a, std::vector<int>& pivot_cols) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::size_t r = 0;
    pivot_cols.clear();
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[r], a[sel]);
        Rational p = a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] /= p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_cols.push_back(static_cast<int>(c));
        ++r;
    }
    return static_cast<int>(r);
}

inline int rat_rank(RatMat a) {
    std::vector<int> pc;
    return rat_rref(a, pc);
}

inline std::vector<RatVec> rat_nullspace(RatMat a) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    std::vector<int> pc;
    rat_rref(a, pc);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pc) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<RatVec> basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        RatVec v(cols, Rational(0));
        v[fc] = 1;
        for (std::size_t k = 0; k < pc.size(); ++k)
            v[static_cast<std::size_t>(pc[k])] = -a[k][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace eds

#endif
