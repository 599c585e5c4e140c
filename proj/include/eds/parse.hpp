#ifndef EDS_PARSE_HPP
#define EDS_PARSE_HPP

#include <cctype>
#include <optional>
#include <string>

#include "eds/expr.hpp"

namespace eds {

/// Recursive-descent parser for the expression grammar:
///   infix + - * / ^ (with ^ right-associative and binding tightest),
///   function application name(arg), variables [a-zA-Z][a-zA-Z0-9_]*,
///   rational literals 123 or 123/456.
class Parser {
public:
    explicit Parser(std::string text) : text_(std::move(text)) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected trailing input '" + text_.substr(pos_) + "'", pos_);
        return e;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+')) e = e + parse_term();
            else if (eat('-')) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (eat('*')) e = e * parse_unary();
            else if (eat('/')) e = e / parse_unary();
            else return e;
        }
    }

    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (eat('^')) {
            Expr e = parse_unary(); // right-associative, allows x^-2 and x^(1/2)
            return pow_e(base, e);
        }
        return base;
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return num(Rational(Int(text_.substr(start, pos_ - start))));
    }

    Expr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (peek() == '(') {
            auto fn = lookup_function(name);
            if (!fn) throw SyntaxError("unknown function '" + name + "'", start);
            eat('(');
            Expr arg = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')' after argument of " + name, pos_);
            if (name == "sqrt") return pow(arg, Rational(1, 2));
            return call(*fn, arg);
        }
        return sym(name);
    }

    static std::optional<Func> lookup_function(const std::string& name) {
        if (name == "exp") return Func::Exp;
        if (name == "log") return Func::Log;
        if (name == "sqrt") return Func::Exp; // placeholder; handled before call()
        if (name == "sin") return Func::Sin;
        if (name == "cos") return Func::Cos;
        if (name == "tan") return Func::Tan;
        if (name == "atan") return Func::Atan;
        return std::nullopt;
    }
};

inline Expr parse(const std::string& text) { return Parser(text).parse(); }

} // namespace eds

#endif
