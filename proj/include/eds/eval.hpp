#ifndef EDS_EVAL_HPP
#define EDS_EVAL_HPP

#include <cmath>
#include <map>
#include <string>
#include <variant>

#include "eds/expr.hpp"

namespace eds {

/// Exact-or-floating value.
using Value = std::variant<Rational, double>;

/// Variable bindings for evaluation.  Every free variable of the expression
/// being evaluated must be bound.
struct Point {
    std::map<std::string, Value> bindings;

    static Point of(std::initializer_list<std::pair<std::string, Rational>> vals) {
        Point p;
        for (auto& [k, v] : vals) p.bindings.emplace(k, v);
        return p;
    }
};

inline double as_double(const Value& v) {
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    return std::get<Rational>(v).convert_to<double>();
}

namespace detail {

inline Value eval_impl(const Expr& e, const Point& pt);

inline Value eval_pow(const Expr& e, const Point& pt) {
    Value b = eval_impl(e->kids[0], pt);
    const Rational& ex = e->expo;
    if (std::holds_alternative<Rational>(b)) {
        const Rational& rb = std::get<Rational>(b);
        if (rb == 0 && ex < 0) throw DomainError("division by zero", to_string(e));
        if (is_integer(ex)) return rational_pow_int(rb, num_of(ex));
        Int q = den_of(ex);
        if (rb < 0 && q % 2 == 0)
            throw DomainError("even root of a negative value", to_string(e));
        if (q < 64) {
            Int rn, rd;
            if (exact_root(num_of(rb), static_cast<unsigned>(q), rn) &&
                exact_root(den_of(rb), static_cast<unsigned>(q), rd))
                return rational_pow_int(Rational(rn, rd), num_of(ex));
        }
        return std::pow(rb.convert_to<double>(), ex.convert_to<double>());
    }
    double db = std::get<double>(b);
    if (is_integer(ex)) {
        if (db == 0.0 && ex < 0) throw DomainError("division by zero", to_string(e));
        return std::pow(db, ex.convert_to<double>());
    }
    if (db < 0 && den_of(ex) % 2 == 0)
        throw DomainError("even root of a negative value", to_string(e));
    if (db == 0.0 && ex < 0) throw DomainError("division by zero", to_string(e));
    double r = std::pow(db, ex.convert_to<double>());
    if (!std::isfinite(r)) throw DomainError("non-finite power", to_string(e));
    return r;
}

inline Value eval_impl(const Expr& e, const Point& pt) {
    switch (e->kind) {
        case Kind::Number:
            return e->number;
        case Kind::Symbol: {
            auto it = pt.bindings.find(e->name);
            if (it == pt.bindings.end())
                throw DomainError("unbound variable", e->name);
            return it->second;
        }
        case Kind::Sum: {
            Value acc = Rational(0);
            for (const auto& k : e->kids) {
                Value v = eval_impl(k, pt);
                if (std::holds_alternative<Rational>(acc) && std::holds_alternative<Rational>(v))
                    acc = std::get<Rational>(acc) + std::get<Rational>(v);
                else
                    acc = as_double(acc) + as_double(v);
            }
            return acc;
        }
        case Kind::Product: {
            Value acc = Rational(1);
            for (const auto& k : e->kids) {
                Value v = eval_impl(k, pt);
                if (std::holds_alternative<Rational>(acc) && std::holds_alternative<Rational>(v))
                    acc = std::get<Rational>(acc) * std::get<Rational>(v);
                else
                    acc = as_double(acc) * as_double(v);
            }
            return acc;
        }
        case Kind::Power:
            return eval_pow(e, pt);
        case Kind::Call: {
            double a = as_double(eval_impl(e->kids[0], pt));
            switch (e->fn) {
                case Func::Exp: {
                    double r = std::exp(a);
                    if (!std::isfinite(r)) throw DomainError("exp overflow", to_string(e));
                    return r;
                }
                case Func::Log:
                    if (a <= 0) throw DomainError("log of a non-positive value", to_string(e));
                    return std::log(a);
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Tan: {
                    double c = std::cos(a);
                    if (std::fabs(c) < 1e-12) throw DomainError("tan near a pole", to_string(e));
                    return std::tan(a);
                }
                case Func::Atan: return std::atan(a);
            }
        }
    }
    throw Error("unreachable evaluation case");
}

/// Evaluate value and cancellation-aware magnitude together.  The magnitude
/// of a sum adds the child magnitudes, so |value| << magnitude detects
/// catastrophic cancellation and calibrates the zero-test tolerance.
struct ValMag {
    double val;
    double mag;
};

inline ValMag eval_mag(const Expr& e, const Point& pt) {
    switch (e->kind) {
        case Kind::Number: {
            double v = e->number.convert_to<double>();
            return {v, std::fabs(v)};
        }
        case Kind::Symbol: {
            auto it = pt.bindings.find(e->name);
            if (it == pt.bindings.end()) throw DomainError("unbound variable", e->name);
            double v = as_double(it->second);
            return {v, std::fabs(v)};
        }
        case Kind::Sum: {
            double v = 0, m = 0;
            for (const auto& k : e->kids) {
                ValMag c = eval_mag(k, pt);
                v += c.val;
                m += c.mag;
            }
            return {v, m};
        }
        case Kind::Product: {
            double v = 1, m = 1;
            for (const auto& k : e->kids) {
                ValMag c = eval_mag(k, pt);
                v *= c.val;
                m *= c.mag;
            }
            return {v, m};
        }
        case Kind::Power: {
            ValMag b = eval_mag(e->kids[0], pt);
            double ex = e->expo.convert_to<double>();
            if (e->expo < 0) {
                if (b.val == 0) throw DomainError("division by zero", to_string(e));
                if (b.val < 0 && den_of(e->expo) % 2 == 0)
                    throw DomainError("even root of a negative value", to_string(e));
                double v = std::pow(b.val, ex);
                return {v, std::fabs(v)};
            }
            if (b.val < 0 && den_of(e->expo) % 2 == 0)
                throw DomainError("even root of a negative value", to_string(e));
            double v = std::pow(b.val, ex);
            double m = std::pow(b.mag, ex);
            if (!std::isfinite(v) || !std::isfinite(m))
                throw DomainError("non-finite power", to_string(e));
            return {v, m};
        }
        case Kind::Call: {
            double v = as_double(eval_impl(e, pt));
            return {v, std::fabs(v)};
        }
    }
    throw Error("unreachable evaluation case");
}

} // namespace detail

/// Evaluate e at pt.  Exact rational result when every binding is rational
/// and no transcendental node is hit; floating otherwise.  Domain violations
/// raise DomainError carrying the offending subexpression.
inline Value evaluate(const Expr& e, const Point& pt) { return detail::eval_impl(e, pt); }

inline double evaluate_double(const Expr& e, const Point& pt) {
    return as_double(detail::eval_impl(e, pt));
}

} // namespace eds

#endif
