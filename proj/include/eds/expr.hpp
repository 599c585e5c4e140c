#ifndef EDS_EXPR_HPP
#define EDS_EXPR_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "eds/errors.hpp"

namespace eds {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int num_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int den_of(const Rational& r) { return boost::multiprecision::denominator(r); }
inline bool is_integer(const Rational& r) { return den_of(r) == 1; }

enum class Kind : std::uint8_t { Number, Symbol, Power, Call, Product, Sum };

/// Function tags of the elementary fragment.  sqrt is parsed but normalizes
/// to Power with exponent 1/2, so it never appears in a normalized tree.
enum class Func : std::uint8_t { Exp, Log, Sin, Cos, Tan, Atan };

inline const char* func_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Atan: return "atan";
    }
    return "?";
}

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Immutable expression node.  Trees are shared; all construction goes
/// through the smart constructors below, which normalize:
///   - sums/products flattened, operands sorted by a fixed total order,
///   - at most one numeric term/factor, like terms and like bases combined,
///   - powers with rational exponents only (x^a is built as exp(a*log x)).
struct ExprNode {
    Kind kind;
    Rational number;         // Kind::Number
    std::string name;        // Kind::Symbol
    std::vector<Expr> kids;  // Sum/Product operands; Power base and Call argument at kids[0]
    Rational expo;           // Kind::Power
    Func fn = Func::Exp;     // Kind::Call
    std::size_t hash = 0;
    int size = 1;            // node count, used for pivot selection
};

// ---------------------------------------------------------------------------
// ordering, equality, hashing
// ---------------------------------------------------------------------------

inline std::size_t hash_combine(std::size_t a, std::size_t b) {
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

inline std::size_t hash_rational(const Rational& r) {
    std::size_t h = 0;
    for (auto limb : {num_of(r), den_of(r)}) {
        std::ostringstream os;
        os << limb;
        h = hash_combine(h, std::hash<std::string>{}(os.str()));
    }
    return h;
}

int compare(const Expr& a, const Expr& b);

inline int compare_rational(const Rational& a, const Rational& b) {
    return a < b ? -1 : (a > b ? 1 : 0);
}

/// Deterministic structural total order.  Never consults hashes, so the
/// canonical form is stable across runs and platforms.
inline int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
        case Kind::Number:
            return compare_rational(a->number, b->number);
        case Kind::Symbol:
            return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
        case Kind::Power: {
            int c = compare(a->kids[0], b->kids[0]);
            if (c) return c;
            return compare_rational(a->expo, b->expo);
        }
        case Kind::Call: {
            if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
            return compare(a->kids[0], b->kids[0]);
        }
        case Kind::Product:
        case Kind::Sum: {
            std::size_t n = std::min(a->kids.size(), b->kids.size());
            for (std::size_t i = 0; i < n; ++i) {
                int c = compare(a->kids[i], b->kids[i]);
                if (c) return c;
            }
            if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

inline bool equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->hash != b->hash) return false;
    return compare(a, b) == 0;
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// smart constructors
// ---------------------------------------------------------------------------

Expr num(Rational r);
Expr sym(const std::string& name);
Expr add(std::vector<Expr> kids);
Expr mul(std::vector<Expr> kids);
Expr pow(Expr base, Rational e);
Expr call(Func fn, Expr arg);

namespace detail {

inline Expr finalize(ExprNode node) {
    std::size_t h = static_cast<std::size_t>(node.kind) * 0x2545F4914F6CDD1DULL;
    int sz = 1;
    switch (node.kind) {
        case Kind::Number: h = hash_combine(h, hash_rational(node.number)); break;
        case Kind::Symbol: h = hash_combine(h, std::hash<std::string>{}(node.name)); break;
        case Kind::Power:
            h = hash_combine(h, node.kids[0]->hash);
            h = hash_combine(h, hash_rational(node.expo));
            sz += node.kids[0]->size;
            break;
        case Kind::Call:
            h = hash_combine(h, static_cast<std::size_t>(node.fn));
            h = hash_combine(h, node.kids[0]->hash);
            sz += node.kids[0]->size;
            break;
        case Kind::Product:
        case Kind::Sum:
            for (const auto& k : node.kids) {
                h = hash_combine(h, k->hash);
                sz += k->size;
            }
            break;
    }
    node.hash = h;
    node.size = sz;
    return std::make_shared<const ExprNode>(std::move(node));
}

} // namespace detail

inline Expr num(Rational r) {
    ExprNode n;
    n.kind = Kind::Number;
    n.number = std::move(r);
    return detail::finalize(std::move(n));
}

inline Expr num(long v) { return num(Rational(v)); }
inline Expr num(long p, long q) { return num(Rational(p) / Rational(q)); }

inline Expr zero() { static const Expr z = num(0L); return z; }
inline Expr one() { static const Expr o = num(1L); return o; }

inline bool is_number(const Expr& e) { return e->kind == Kind::Number; }
inline bool is_zero_number(const Expr& e) { return e->kind == Kind::Number && e->number == 0; }
inline bool is_one_number(const Expr& e) { return e->kind == Kind::Number && e->number == 1; }

inline Expr sym(const std::string& name) {
    ExprNode n;
    n.kind = Kind::Symbol;
    n.name = name;
    return detail::finalize(std::move(n));
}

namespace detail {

/// Integer q-th root if exact.
inline bool exact_root(const Int& v, unsigned q, Int& out) {
    if (v == 0) { out = 0; return true; }
    if (v < 0) {
        if (q % 2 == 0) return false;
        Int r;
        if (!exact_root(-v, q, r)) return false;
        out = -r;
        return true;
    }
    if (v == 1) { out = 1; return true; }
    // binary search
    Int lo = 1, hi = v;
    while (lo <= hi) {
        Int mid = (lo + hi) / 2;
        Int p = 1;
        bool over = false;
        for (unsigned i = 0; i < q; ++i) {
            p *= mid;
            if (p > v) { over = true; break; }
        }
        if (!over && p == v) { out = mid; return true; }
        if (over || p > v) hi = mid - 1; else lo = mid + 1;
    }
    return false;
}

inline Rational rational_pow_int(const Rational& base, const Int& e) {
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw DomainError("zero raised to a negative power", "0");
        return Rational(0);
    }
    Int n = num_of(base), d = den_of(base);
    Int ae = e < 0 ? Int(-e) : e;
    Int np = 1, dp = 1;
    for (Int i = 0; i < ae; ++i) { np *= n; dp *= d; }
    Rational r(np, dp);
    if (e < 0) r = Rational(1) / r;
    return r;
}

} // namespace detail

inline Expr pow(Expr base, Rational e) {
    if (e == 0) return one();
    if (e == 1) return base;
    if (base->kind == Kind::Number) {
        if (is_integer(e)) return num(detail::rational_pow_int(base->number, num_of(e)));
        // try an exact q-th root of the rational base
        if (base->number != 0) {
            Int q = den_of(e);
            if (q > 1 && q < 64) {
                Int rn, rd;
                if (detail::exact_root(num_of(base->number), static_cast<unsigned>(q), rn) &&
                    detail::exact_root(den_of(base->number), static_cast<unsigned>(q), rd)) {
                    return num(detail::rational_pow_int(Rational(rn, rd), num_of(e)));
                }
            }
        } else {
            return zero(); // 0^(p/q) with p/q > 0 handled; negative exponents of 0 caught above
        }
    }
    if (base->kind == Kind::Power && is_integer(e)) {
        // (b^f)^n = b^(f n) is an identity for integer n wherever b^f is defined
        return pow(base->kids[0], base->expo * e);
    }
    if (base->kind == Kind::Product && is_integer(e)) {
        std::vector<Expr> kids;
        kids.reserve(base->kids.size());
        for (const auto& k : base->kids) kids.push_back(pow(k, e));
        return mul(std::move(kids));
    }
    if (base->kind == Kind::Call && base->fn == Func::Exp) {
        return call(Func::Exp, mul({num(e), base->kids[0]}));
    }
    ExprNode n;
    n.kind = Kind::Power;
    n.kids = {std::move(base)};
    n.expo = std::move(e);
    return detail::finalize(std::move(n));
}

namespace detail {

/// Split a normalized term into (rational coefficient, remaining factor).
inline std::pair<Rational, Expr> coeff_split(const Expr& t) {
    if (t->kind == Kind::Number) return {t->number, one()};
    if (t->kind == Kind::Product && t->kids[0]->kind == Kind::Number) {
        if (t->kids.size() == 2) return {t->kids[0]->number, t->kids[1]};
        ExprNode n;
        n.kind = Kind::Product;
        n.kids.assign(t->kids.begin() + 1, t->kids.end());
        return {t->kids[0]->number, finalize(std::move(n))};
    }
    return {Rational(1), t};
}

/// Match c*log(u) inside an exp argument; used to fold exp(a*log x) back to
/// powers when a becomes a concrete rational.
inline bool match_log_multiple(const Expr& term, Rational& coeff, Expr& logarg) {
    if (term->kind == Kind::Call && term->fn == Func::Log) {
        coeff = 1;
        logarg = term->kids[0];
        return true;
    }
    if (term->kind == Kind::Product && term->kids.size() == 2 &&
        term->kids[0]->kind == Kind::Number &&
        term->kids[1]->kind == Kind::Call && term->kids[1]->fn == Func::Log) {
        coeff = term->kids[0]->number;
        logarg = term->kids[1]->kids[0];
        return true;
    }
    return false;
}

} // namespace detail

inline Expr call(Func fn, Expr arg) {
    if (arg->kind == Kind::Number) {
        const Rational& v = arg->number;
        switch (fn) {
            case Func::Exp: if (v == 0) return one(); break;
            case Func::Log:
                if (v == 1) return zero();
                if (v <= 0) throw DomainError("log of a non-positive constant", "log");
                break;
            case Func::Sin: if (v == 0) return zero(); break;
            case Func::Cos: if (v == 0) return one(); break;
            case Func::Tan: if (v == 0) return zero(); break;
            case Func::Atan: if (v == 0) return zero(); break;
        }
    }
    if (fn == Func::Exp && arg->kind == Kind::Call && arg->fn == Func::Log) return arg->kids[0];
    if (fn == Func::Log && arg->kind == Kind::Call && arg->fn == Func::Exp) return arg->kids[0];
    if (fn == Func::Exp) {
        // exp(c1*log u1 + c2*log u2 + r) -> u1^c1 * u2^c2 * exp(r)
        std::vector<Expr> terms;
        if (arg->kind == Kind::Sum) terms = arg->kids; else terms = {arg};
        std::vector<Expr> pulled;
        std::vector<Expr> rest;
        for (const auto& t : terms) {
            Rational c;
            Expr u;
            if (detail::match_log_multiple(t, c, u)) pulled.push_back(pow(u, c));
            else rest.push_back(t);
        }
        if (!pulled.empty()) {
            if (!rest.empty()) {
                ExprNode rn;
                rn.kind = Kind::Call;
                rn.fn = Func::Exp;
                rn.kids = {add(std::move(rest))};
                pulled.push_back(detail::finalize(std::move(rn)));
            }
            return mul(std::move(pulled));
        }
    }
    ExprNode n;
    n.kind = Kind::Call;
    n.fn = fn;
    n.kids = {std::move(arg)};
    return detail::finalize(std::move(n));
}

inline Expr mul(std::vector<Expr> kids) {
    // flatten and fold numeric factors
    std::vector<Expr> flat;
    Rational coeff(1);
    std::vector<Expr> work(std::move(kids));
    while (!work.empty()) {
        Expr k = std::move(work.back());
        work.pop_back();
        if (k->kind == Kind::Product) {
            for (const auto& kk : k->kids) work.push_back(kk);
        } else if (k->kind == Kind::Number) {
            coeff *= k->number;
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (coeff == 0) return zero();

    // combine like bases: u^a * u^b -> u^(a+b); exp factors merge by argument sum
    std::map<Expr, Rational, ExprLess> bases;
    std::vector<Expr> exp_args;
    for (const auto& f : flat) {
        if (f->kind == Kind::Call && f->fn == Func::Exp) {
            exp_args.push_back(f->kids[0]);
            continue;
        }
        if (f->kind == Kind::Power) bases[f->kids[0]] += f->expo;
        else bases[f] += Rational(1);
    }
    std::vector<Expr> rebuilt;
    bool reflatten = false;
    for (const auto& [base, e] : bases) {
        if (e == 0) continue;
        Expr p = pow(base, e);
        if (p->kind == Kind::Number) { coeff *= p->number; continue; }
        if (p->kind == Kind::Product || (p->kind == Kind::Call && p->fn == Func::Exp)) reflatten = true;
        rebuilt.push_back(std::move(p));
    }
    if (!exp_args.empty()) {
        Expr merged = call(Func::Exp, exp_args.size() == 1 ? exp_args[0] : add(std::move(exp_args)));
        if (merged->kind == Kind::Number) coeff *= merged->number;
        else {
            if (merged->kind == Kind::Product) reflatten = true;
            rebuilt.push_back(std::move(merged));
        }
    }
    if (coeff == 0) return zero();
    if (reflatten) {
        // a combined power collapsed to a product or rebuilt exp; run once more
        rebuilt.push_back(num(coeff));
        return mul(std::move(rebuilt));
    }
    std::sort(rebuilt.begin(), rebuilt.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    if (rebuilt.empty()) return num(coeff);
    if (coeff == 1 && rebuilt.size() == 1) return rebuilt[0];
    if (rebuilt.size() == 1 && rebuilt[0]->kind == Kind::Sum) {
        // numeric coefficients distribute over a lone sum, so that
        // 2*(x+y) + (x+y) and 3*x + 3*y share one canonical form
        std::vector<Expr> terms;
        terms.reserve(rebuilt[0]->kids.size());
        Expr c = num(coeff);
        for (const auto& t : rebuilt[0]->kids) terms.push_back(mul({c, t}));
        return add(std::move(terms));
    }
    ExprNode n;
    n.kind = Kind::Product;
    if (coeff != 1) n.kids.push_back(num(coeff));
    for (auto& r : rebuilt) n.kids.push_back(std::move(r));
    if (n.kids.size() == 1) return n.kids[0];
    return detail::finalize(std::move(n));
}

inline Expr add(std::vector<Expr> kids) {
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> terms; // rest -> coefficient
    std::vector<Expr> work(std::move(kids));
    while (!work.empty()) {
        Expr k = std::move(work.back());
        work.pop_back();
        if (k->kind == Kind::Sum) {
            for (const auto& kk : k->kids) work.push_back(kk);
        } else if (k->kind == Kind::Number) {
            constant += k->number;
        } else {
            auto [c, rest] = detail::coeff_split(k);
            terms[rest] += c;
        }
    }
    std::vector<Expr> out;
    bool nested = false;
    for (const auto& [rest, c] : terms) {
        if (c == 0) continue;
        if (c == 1) {
            out.push_back(rest);
            continue;
        }
        if (rest->kind == Kind::Product) {
            ExprNode n;
            n.kind = Kind::Product;
            n.kids.push_back(num(c));
            for (const auto& f : rest->kids) n.kids.push_back(f);
            out.push_back(detail::finalize(std::move(n)));
        } else {
            Expr t = mul({num(c), rest});
            if (t->kind == Kind::Sum || t->kind == Kind::Number) nested = true;
            out.push_back(std::move(t));
        }
    }
    if (nested) {
        // a coefficient distributed over a sum factor; flatten once more
        out.push_back(num(constant));
        return add(std::move(out));
    }
    std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    if (constant != 0) out.insert(out.begin(), num(constant));
    if (out.empty()) return zero();
    if (out.size() == 1) return out[0];
    ExprNode n;
    n.kind = Kind::Sum;
    n.kids = std::move(out);
    return detail::finalize(std::move(n));
}

// ---------------------------------------------------------------------------
// operator sugar
// ---------------------------------------------------------------------------

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({num(-1L), b})}); }
inline Expr operator-(const Expr& a) { return mul({num(-1L), a}); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, Rational(-1))}); }
inline Expr operator+(const Expr& a, long b) { return add({a, num(b)}); }
inline Expr operator-(const Expr& a, long b) { return add({a, num(-b)}); }
inline Expr operator*(long a, const Expr& b) { return mul({num(a), b}); }

/// General power: rational exponents stay Power nodes, anything else becomes
/// exp(e*log(base)) so differentiation rules remain uniform.
inline Expr pow_e(const Expr& base, const Expr& e) {
    if (e->kind == Kind::Number) return pow(base, e->number);
    return call(Func::Exp, mul({e, call(Func::Log, base)}));
}

inline Expr exp_e(const Expr& a) { return call(Func::Exp, a); }
inline Expr log_e(const Expr& a) { return call(Func::Log, a); }
inline Expr sqrt_e(const Expr& a) { return pow(a, Rational(1, 2)); }

// ---------------------------------------------------------------------------
// free variables, substitution, differentiation
// ---------------------------------------------------------------------------

inline void collect_variables(const Expr& e, std::set<std::string>& out) {
    switch (e->kind) {
        case Kind::Number: return;
        case Kind::Symbol: out.insert(e->name); return;
        default:
            for (const auto& k : e->kids) collect_variables(k, out);
    }
}

inline std::set<std::string> variables(const Expr& e) {
    std::set<std::string> s;
    collect_variables(e, s);
    return s;
}

inline bool depends_on(const Expr& e, const std::string& v) {
    switch (e->kind) {
        case Kind::Number: return false;
        case Kind::Symbol: return e->name == v;
        default:
            for (const auto& k : e->kids)
                if (depends_on(k, v)) return true;
            return false;
    }
}

/// Simultaneous substitution followed by normalization.
inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& bind) {
    switch (e->kind) {
        case Kind::Number: return e;
        case Kind::Symbol: {
            auto it = bind.find(e->name);
            return it == bind.end() ? e : it->second;
        }
        case Kind::Power: return pow(substitute(e->kids[0], bind), e->expo);
        case Kind::Call: return call(e->fn, substitute(e->kids[0], bind));
        case Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(substitute(k, bind));
            return mul(std::move(kids));
        }
        case Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(substitute(k, bind));
            return add(std::move(kids));
        }
    }
    return e;
}

inline Expr differentiate(const Expr& e, const std::string& v) {
    switch (e->kind) {
        case Kind::Number: return zero();
        case Kind::Symbol: return e->name == v ? one() : zero();
        case Kind::Sum: {
            std::vector<Expr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(differentiate(k, v));
            return add(std::move(kids));
        }
        case Kind::Product: {
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                std::vector<Expr> fs;
                fs.push_back(differentiate(e->kids[i], v));
                for (std::size_t j = 0; j < e->kids.size(); ++j)
                    if (j != i) fs.push_back(e->kids[j]);
                terms.push_back(mul(std::move(fs)));
            }
            return add(std::move(terms));
        }
        case Kind::Power: {
            const Expr& b = e->kids[0];
            return mul({num(e->expo), pow(b, e->expo - 1), differentiate(b, v)});
        }
        case Kind::Call: {
            const Expr& u = e->kids[0];
            Expr du = differentiate(u, v);
            switch (e->fn) {
                case Func::Exp: return mul({e, du});
                case Func::Log: return mul({du, pow(u, Rational(-1))});
                case Func::Sin: return mul({call(Func::Cos, u), du});
                case Func::Cos: return mul({num(-1L), call(Func::Sin, u), du});
                case Func::Tan: return mul({add({one(), pow(call(Func::Tan, u), Rational(2))}), du});
                case Func::Atan: return mul({du, pow(add({one(), pow(u, Rational(2))}), Rational(-1))});
            }
        }
    }
    return zero();
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << num_of(r);
    if (den_of(r) != 1) os << "/" << den_of(r);
    return os.str();
}

// precedence levels: sum 1, product 2, unary minus ~1.5, power 3, atom 4
std::string print_impl(const Expr& e, int parent_prec);

inline std::string print_product(const Expr& e, bool skip_leading_sign) {
    // e is a Product node
    std::string s;
    std::size_t start = 0;
    if (e->kids[0]->kind == Kind::Number) {
        Rational c = e->kids[0]->number;
        if (skip_leading_sign && c < 0) c = -c;
        start = 1;
        if (c != 1) {
            if (c == -1) s += "-";
            else s += rational_str(c) + "*";
        }
    }
    for (std::size_t i = start; i < e->kids.size(); ++i) {
        if (i > start) s += "*";
        s += print_impl(e->kids[i], 2);
    }
    return s;
}

inline std::string print_impl(const Expr& e, int parent_prec) {
    switch (e->kind) {
        case Kind::Number: {
            std::string s = rational_str(e->number);
            if ((e->number < 0 || den_of(e->number) != 1) && parent_prec >= 2)
                return "(" + s + ")";
            return s;
        }
        case Kind::Symbol:
            return e->name;
        case Kind::Call:
            return std::string(func_name(e->fn)) + "(" + print_impl(e->kids[0], 0) + ")";
        case Kind::Power: {
            std::string b = print_impl(e->kids[0], 3);
            std::string ex = rational_str(e->expo);
            if (e->expo < 0 || den_of(e->expo) != 1) ex = "(" + ex + ")";
            std::string s = b + "^" + ex;
            if (parent_prec >= 3) return "(" + s + ")";
            return s;
        }
        case Kind::Product: {
            std::string s = print_product(e, false);
            if (parent_prec >= 3) return "(" + s + ")";
            return s;
        }
        case Kind::Sum: {
            std::string s;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                const Expr& t = e->kids[i];
                bool neg = (t->kind == Kind::Number && t->number < 0) ||
                           (t->kind == Kind::Product && t->kids[0]->kind == Kind::Number &&
                            t->kids[0]->number < 0);
                if (i == 0) {
                    s += print_impl(t, 1);
                } else if (neg) {
                    s += " - ";
                    if (t->kind == Kind::Number) s += rational_str(-t->number);
                    else s += print_product(t, true);
                } else {
                    s += " + " + print_impl(t, 1);
                }
            }
            if (parent_prec >= 2) return "(" + s + ")";
            return s;
        }
    }
    return "?";
}

} // namespace detail

inline std::string to_string(const Expr& e) { return detail::print_impl(e, 0); }

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

} // namespace eds

#endif
