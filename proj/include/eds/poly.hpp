#ifndef EDS_POLY_HPP
#define EDS_POLY_HPP

#include <map>
#include <optional>
#include <vector>

#include "eds/expr.hpp"

namespace eds {

/// Exponent vector over a fixed local variable list.  All monomials of a
/// computation share the same length.
using Monomial = std::vector<int>;

/// Expanded multivariate polynomial with exact rational coefficients.
struct Poly {
    int nvars = 0;
    std::map<Monomial, Rational> terms; // zero coefficients never stored

    static Poly constant(int nvars, Rational c) {
        Poly p;
        p.nvars = nvars;
        if (c != 0) p.terms.emplace(Monomial(nvars, 0), std::move(c));
        return p;
    }

    static Poly variable(int nvars, int index, int power = 1) {
        Poly p;
        p.nvars = nvars;
        Monomial m(nvars, 0);
        m[index] = power;
        p.terms.emplace(std::move(m), Rational(1));
        return p;
    }

    bool is_zero() const { return terms.empty(); }

    bool is_constant() const {
        if (terms.empty()) return true;
        return terms.size() == 1 && terms.begin()->first == Monomial(nvars, 0);
    }

    Rational constant_value() const {
        if (terms.empty()) return Rational(0);
        return terms.begin()->second;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms) {
            int s = 0;
            for (int e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [m, c] : b.terms) {
            auto it = r.terms.find(m);
            if (it == r.terms.end()) r.terms.emplace(m, c);
            else {
                it->second += c;
                if (it->second == 0) r.terms.erase(it);
            }
        }
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (b * Rational(-1)); }

    friend Poly operator*(const Poly& a, const Rational& s) {
        Poly r;
        r.nvars = a.nvars;
        if (s == 0) return r;
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, c * s);
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        r.nvars = a.nvars;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) {
                Monomial m(a.nvars);
                for (int i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
                auto it = r.terms.find(m);
                if (it == r.terms.end()) r.terms.emplace(std::move(m), ca * cb);
                else {
                    it->second += ca * cb;
                    if (it->second == 0) r.terms.erase(it);
                }
            }
        return r;
    }

    Poly pow_int(int e) const {
        Poly r = constant(nvars, Rational(1));
        Poly b = *this;
        int n = e;
        while (n > 0) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    /// Leading term wrt the map's lexicographic monomial order.
    std::pair<Monomial, Rational> leading() const { return *terms.rbegin(); }

    /// Divide by the leading coefficient so the leading term is monic.
    /// Returns the removed coefficient.
    Rational make_monic() {
        if (terms.empty()) return Rational(1);
        Rational lc = terms.rbegin()->second;
        for (auto& [m, c] : terms) c /= lc;
        return lc;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }
    friend bool operator<(const Poly& a, const Poly& b) { return a.terms < b.terms; }
};

/// Exact multivariate division: returns a/b when the remainder is zero.
inline std::optional<Poly> exact_divide(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    Poly rem = a;
    Poly quot;
    quot.nvars = a.nvars;
    auto [lbm, lbc] = b.leading();
    while (!rem.is_zero()) {
        auto [lrm, lrc] = rem.leading();
        Monomial q(a.nvars);
        for (int i = 0; i < a.nvars; ++i) {
            q[i] = lrm[i] - lbm[i];
            if (q[i] < 0) return std::nullopt;
        }
        Rational qc = lrc / lbc;
        Poly qt;
        qt.nvars = a.nvars;
        qt.terms.emplace(std::move(q), qc);
        quot = quot + qt;
        rem = rem - qt * b;
    }
    return quot;
}

} // namespace eds

#endif
