#ifndef EDS_TESTS_GENERATORS_HPP
#define EDS_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include "eds/expr.hpp"

namespace eds::testgen {

/// Seeded random expression generator for property tests.  `rational_only`
/// restricts to the fragment {rationals, variables, +, *, integer powers};
/// otherwise elementary functions and square roots are mixed in.
struct ExprGen {
    std::mt19937_64 rng;
    std::vector<std::string> vars;
    bool rational_only = true;

    explicit ExprGen(std::uint64_t seed, std::vector<std::string> names = {"x", "y"},
                     bool rat_only = true)
        : rng(seed), vars(std::move(names)), rational_only(rat_only) {}

    Expr atom() {
        std::uniform_int_distribution<int> pick(0, 3);
        if (pick(rng) == 0) {
            std::uniform_int_distribution<int> c(-4, 4);
            int n = c(rng);
            std::uniform_int_distribution<int> d(1, 3);
            return num(Rational(n, d(rng)));
        }
        std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
        return sym(vars[v(rng)]);
    }

    Expr gen(int depth) {
        try {
            return gen_unchecked(depth);
        } catch (const DomainError&) {
            return atom(); // constant folding hit a domain edge such as 0^-2
        }
    }

    Expr gen_unchecked(int depth) {
        if (depth <= 0) return atom();
        std::uniform_int_distribution<int> pick(0, rational_only ? 3 : 5);
        switch (pick(rng)) {
            case 0:
                return atom();
            case 1:
                return gen(depth - 1) + gen(depth - 1);
            case 2:
                return gen(depth - 1) * gen(depth - 1);
            case 3: {
                std::uniform_int_distribution<int> e(-2, 3);
                int k = e(rng);
                if (k == 0) k = 2;
                return pow(gen(depth - 1), Rational(k));
            }
            case 4: {
                std::uniform_int_distribution<int> f(0, 2);
                switch (f(rng)) {
                    case 0: return exp_e(gen(depth - 1));
                    case 1: return log_e(one() + pow(gen(depth - 1), Rational(2)));
                    default: return call(Func::Sin, gen(depth - 1));
                }
            }
            default:
                return sqrt_e(one() + pow(gen(depth - 1), Rational(2)));
        }
    }
};

/// Rebuild an expression bottom-up through the smart constructors; used to
/// check that normalization is idempotent.
inline Expr rebuild(const Expr& e) {
    switch (e->kind) {
        case Kind::Number:
            return num(e->number);
        case Kind::Symbol:
            return sym(e->name);
        case Kind::Power:
            return pow(rebuild(e->kids[0]), e->expo);
        case Kind::Call:
            return call(e->fn, rebuild(e->kids[0]));
        case Kind::Product: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(rebuild(k));
            return mul(std::move(kids));
        }
        case Kind::Sum: {
            std::vector<Expr> kids;
            for (const auto& k : e->kids) kids.push_back(rebuild(k));
            return add(std::move(kids));
        }
    }
    return e;
}

} // namespace eds::testgen

#endif
