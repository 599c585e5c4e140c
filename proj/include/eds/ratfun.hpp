#ifndef EDS_RATFUN_HPP
#define EDS_RATFUN_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "eds/poly.hpp"

namespace eds {

/// Atom table for rational-function canonicalization.  Atoms are plain
/// symbols plus opaque transcendental kernels (function applications and
/// fractional powers); a kernel is identified with the whole subtree and two
/// kernels coincide iff they are structurally equal.
struct AtomTable {
    std::vector<Expr> atoms; // sorted by the structural order

    int index_of(const Expr& a) const {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), a, ExprLess{});
        if (it == atoms.end() || !equal(*it, a))
            throw Error("atom table does not contain " + to_string(a));
        return static_cast<int>(it - atoms.begin());
    }

    bool has_kernels() const {
        for (const auto& a : atoms)
            if (a->kind != Kind::Symbol) return true;
        return false;
    }
};

/// num / prod(den[i].first ^ den[i].second) with monic sorted den factors.
struct RatFun {
    Poly num;
    std::vector<std::pair<Poly, int>> den;
};

namespace detail {

/// Canonical kernel of a fractional power u^(p/q): the atom is u^(1/q).
inline Expr fractional_power_atom(const Expr& e) {
    return pow(e->kids[0], Rational(1, den_of(e->expo)));
}

inline void collect_atoms(const Expr& e, std::vector<Expr>& out) {
    switch (e->kind) {
        case Kind::Number:
            return;
        case Kind::Symbol:
        case Kind::Call:
            out.push_back(e);
            return;
        case Kind::Power:
            if (!is_integer(e->expo)) out.push_back(fractional_power_atom(e));
            else collect_atoms(e->kids[0], out);
            return;
        case Kind::Product:
        case Kind::Sum:
            for (const auto& k : e->kids) collect_atoms(k, out);
            return;
    }
}

inline void ratfun_cancel(RatFun& f) {
    if (f.num.is_zero()) {
        f.den.clear();
        return;
    }
    for (auto& [fac, mult] : f.den) {
        while (mult > 0) {
            auto q = exact_divide(f.num, fac);
            if (!q) break;
            f.num = *q;
            --mult;
        }
    }
    f.den.erase(std::remove_if(f.den.begin(), f.den.end(),
                               [](const auto& p) { return p.second == 0; }),
                f.den.end());
}

inline void den_push(std::vector<std::pair<Poly, int>>& den, Poly fac, int mult, Poly& num) {
    if (fac.is_constant()) {
        Rational c = fac.constant_value();
        Rational scale(1);
        for (int i = 0; i < mult; ++i) scale /= c;
        num = num * scale;
        return;
    }
    Rational lc = fac.make_monic();
    Rational scale(1);
    for (int i = 0; i < mult; ++i) scale /= lc;
    num = num * scale;
    for (auto& [g, m] : den)
        if (g == fac) {
            m += mult;
            return;
        }
    den.emplace_back(std::move(fac), mult);
}

inline void den_sort(RatFun& f) {
    std::sort(f.den.begin(), f.den.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

inline RatFun ratfun_mul(const RatFun& a, const RatFun& b) {
    RatFun r;
    r.num = a.num * b.num;
    r.den = a.den;
    for (const auto& [fac, m] : b.den) den_push(r.den, fac, m, r.num);
    ratfun_cancel(r);
    den_sort(r);
    return r;
}

inline RatFun ratfun_add(const RatFun& a, const RatFun& b) {
    RatFun r;
    // den = union with max multiplicities
    r.den = a.den;
    Poly dummy = Poly::constant(a.num.nvars, Rational(1));
    for (const auto& [fac, m] : b.den) {
        bool found = false;
        for (auto& [g, mg] : r.den)
            if (g == fac) {
                mg = std::max(mg, m);
                found = true;
                break;
            }
        if (!found) r.den.emplace_back(fac, m);
    }
    auto multiplier = [&](const std::vector<std::pair<Poly, int>>& own) {
        Poly m = Poly::constant(a.num.nvars, Rational(1));
        for (const auto& [fac, mr] : r.den) {
            int have = 0;
            for (const auto& [g, mo] : own)
                if (g == fac) { have = mo; break; }
            for (int i = have; i < mr; ++i) m = m * fac;
        }
        return m;
    };
    r.num = a.num * multiplier(a.den) + b.num * multiplier(b.den);
    ratfun_cancel(r);
    den_sort(r);
    return r;
}

inline RatFun ratfun_pow(const RatFun& a, int e) {
    RatFun r;
    r.num = Poly::constant(a.num.nvars, Rational(1));
    if (e == 0) return r;
    bool invert = e < 0;
    int n = invert ? -e : e;
    RatFun base = a;
    if (invert) {
        if (a.num.is_zero()) throw DomainError("division by zero in canonical form", "1/0");
        base.num = Poly::constant(a.num.nvars, Rational(1));
        base.den.clear();
        Poly numerator = a.num;
        den_push(base.den, numerator, 1, base.num);
        for (const auto& [fac, m] : a.den) {
            Poly f = fac;
            for (int i = 0; i < m; ++i) base.num = base.num * f;
        }
        ratfun_cancel(base);
        den_sort(base);
    }
    for (int i = 0; i < n; ++i) r = ratfun_mul(r, base);
    return r;
}

inline RatFun to_ratfun_impl(const Expr& e, const AtomTable& table) {
    const int nv = static_cast<int>(table.atoms.size());
    switch (e->kind) {
        case Kind::Number: {
            RatFun r;
            r.num = Poly::constant(nv, e->number);
            return r;
        }
        case Kind::Symbol:
        case Kind::Call: {
            RatFun r;
            r.num = Poly::variable(nv, table.index_of(e));
            return r;
        }
        case Kind::Power: {
            if (is_integer(e->expo))
                return ratfun_pow(to_ratfun_impl(e->kids[0], table),
                                  static_cast<int>(num_of(e->expo)));
            // u^(p/q) = atom(u^(1/q))^p
            Expr atom = fractional_power_atom(e);
            RatFun r;
            r.num = Poly::variable(nv, table.index_of(atom));
            return ratfun_pow(r, static_cast<int>(num_of(e->expo)));
        }
        case Kind::Product: {
            RatFun r;
            r.num = Poly::constant(nv, Rational(1));
            for (const auto& k : e->kids) r = ratfun_mul(r, to_ratfun_impl(k, table));
            return r;
        }
        case Kind::Sum: {
            RatFun r;
            r.num = Poly::constant(nv, Rational(0));
            for (const auto& k : e->kids) r = ratfun_add(r, to_ratfun_impl(k, table));
            return r;
        }
    }
    RatFun r;
    r.num = Poly::constant(nv, Rational(0));
    return r;
}

} // namespace detail

inline AtomTable atom_table(const std::vector<Expr>& es) {
    AtomTable t;
    for (const auto& e : es) detail::collect_atoms(e, t.atoms);
    std::sort(t.atoms.begin(), t.atoms.end(), ExprLess{});
    t.atoms.erase(std::unique(t.atoms.begin(), t.atoms.end(),
                              [](const Expr& a, const Expr& b) { return equal(a, b); }),
                  t.atoms.end());
    return t;
}

inline AtomTable atom_table(const Expr& e) { return atom_table(std::vector<Expr>{e}); }

/// Canonical rational-function form of e over the atom table: expanded
/// numerator over a monic factored denominator.
inline RatFun to_ratfun(const Expr& e, const AtomTable& table) {
    return detail::to_ratfun_impl(e, table);
}

inline Expr poly_to_expr(const Poly& p, const AtomTable& table) {
    std::vector<Expr> terms;
    for (const auto& [m, c] : p.terms) {
        std::vector<Expr> fs;
        fs.push_back(num(c));
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) fs.push_back(pow(table.atoms[i], Rational(m[i])));
        terms.push_back(mul(std::move(fs)));
    }
    return add(std::move(terms));
}

inline Expr ratfun_to_expr(const RatFun& f, const AtomTable& table) {
    Expr e = poly_to_expr(f.num, table);
    std::vector<Expr> fs{e};
    for (const auto& [fac, m] : f.den)
        fs.push_back(pow(poly_to_expr(fac, table), Rational(-m)));
    return mul(std::move(fs));
}

/// Rewrite e in canonical rational-function form (expanded numerator over a
/// factored denominator).  Used to control expression swell in elimination.
inline Expr ratfun_normalize(const Expr& e) {
    AtomTable t = atom_table(e);
    return ratfun_to_expr(to_ratfun(e, t), t);
}

} // namespace eds

#endif
