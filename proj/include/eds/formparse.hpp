#ifndef EDS_FORMPARSE_HPP
#define EDS_FORMPARSE_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "eds/form.hpp"
#include "eds/parse.hpp"

namespace eds {

/// Parser for form literals against a chart, e.g.
///   dz + p*dx + p^2*dy
///   [dp]^[dx + 2*p*dy]
/// `d<coord>` is the coordinate differential; `^` between forms is the wedge,
/// between scalars exponentiation.  Brackets group subexpressions.
class FormParser {
public:
    FormParser(std::string text, Chart chart) : text_(std::move(text)), chart_(std::move(chart)) {}

    Form parse() {
        Value v = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw SyntaxError("unexpected trailing input '" + text_.substr(pos_) + "'", pos_);
        return as_form(v);
    }

private:
    using Value = std::variant<Expr, Form>;

    std::string text_;
    Chart chart_;
    std::size_t pos_ = 0;

    static bool is_form(const Value& v) { return std::holds_alternative<Form>(v); }

    Form as_form(const Value& v) const {
        if (is_form(v)) return std::get<Form>(v);
        return Form::function(chart_, std::get<Expr>(v));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Value parse_sum() {
        Value v = parse_term();
        for (;;) {
            if (eat('+')) v = combine_add(v, parse_term(), false);
            else if (eat('-')) v = combine_add(v, parse_term(), true);
            else return v;
        }
    }

    Value combine_add(const Value& a, const Value& b, bool negate) {
        if (!is_form(a) && !is_form(b)) {
            Expr rb = std::get<Expr>(b);
            return negate ? std::get<Expr>(a) - rb : std::get<Expr>(a) + rb;
        }
        Form fb = as_form(b);
        if (negate) fb = num(-1L) * fb;
        return as_form(a) + fb;
    }

    Value parse_term() {
        Value v = parse_unary();
        for (;;) {
            if (eat('*')) v = combine_mul(v, parse_unary());
            else if (eat('/')) {
                Value d = parse_unary();
                if (is_form(d)) throw SyntaxError("cannot divide by a form", pos_);
                Expr inv = pow(std::get<Expr>(d), Rational(-1));
                v = combine_mul(v, Value(inv));
            } else
                return v;
        }
    }

    Value combine_mul(const Value& a, const Value& b) {
        if (is_form(a) && is_form(b))
            throw SyntaxError("use ^ for the wedge of two forms", pos_);
        if (is_form(a)) return std::get<Expr>(b) * std::get<Form>(a);
        if (is_form(b)) return std::get<Expr>(a) * std::get<Form>(b);
        return std::get<Expr>(a) * std::get<Expr>(b);
    }

    Value parse_unary() {
        if (eat('-')) {
            Value v = parse_unary();
            if (is_form(v)) return num(-1L) * std::get<Form>(v);
            return -std::get<Expr>(v);
        }
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Value parse_power() {
        Value base = parse_primary();
        if (eat('^')) {
            Value e = parse_unary();
            if (is_form(base) || is_form(e)) {
                if (!is_form(base) || !is_form(e))
                    throw SyntaxError("^ mixes a form and a scalar", pos_);
                return wedge(std::get<Form>(base), std::get<Form>(e));
            }
            return pow_e(std::get<Expr>(base), std::get<Expr>(e));
        }
        return base;
    }

    Value parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')'", pos_);
            return v;
        }
        if (c == '[') {
            ++pos_;
            Value v = parse_sum();
            if (!eat(']')) throw SyntaxError("expected ']'", pos_);
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return Value(num(Rational(Int(text_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    Value parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        // differential of a chart coordinate
        if (name.size() > 1 && name[0] == 'd') {
            std::string coord = name.substr(1);
            for (const auto& cc : chart_.coords)
                if (cc == coord) return Value(Form::differential(chart_, coord));
        }
        if (peek() == '(') {
            eat('(');
            Value arg = parse_sum();
            if (!eat(')')) throw SyntaxError("expected ')' after argument of " + name, pos_);
            if (is_form(arg)) throw SyntaxError("function of a form", pos_);
            Expr a = std::get<Expr>(arg);
            if (name == "sqrt") return Value(pow(a, Rational(1, 2)));
            if (name == "exp") return Value(call(Func::Exp, a));
            if (name == "log") return Value(call(Func::Log, a));
            if (name == "sin") return Value(call(Func::Sin, a));
            if (name == "cos") return Value(call(Func::Cos, a));
            if (name == "tan") return Value(call(Func::Tan, a));
            if (name == "atan") return Value(call(Func::Atan, a));
            throw SyntaxError("unknown function '" + name + "'", start);
        }
        return Value(sym(name));
    }
};

inline Form parse_form(const std::string& text, const Chart& chart) {
    return FormParser(text, chart).parse();
}

/// Fixture file format: a chart declaration line `chart <coord> <coord> ...`
/// followed by one generator per line.  Blank lines and `#` comments allowed.
struct Fixture {
    Chart chart;
    std::vector<Form> generators;
};

inline Fixture parse_fixture(std::istream& in) {
    std::string line;
    Fixture fx;
    bool have_chart = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (!have_chart) {
            if (first != "chart")
                throw SyntaxError("fixture must start with a chart declaration", 0);
            std::vector<std::string> coords;
            std::string c;
            while (ls >> c) coords.push_back(c);
            if (coords.empty()) throw SyntaxError("chart declaration lists no coordinates", 0);
            fx.chart = Chart("fixture", coords);
            have_chart = true;
            continue;
        }
        fx.generators.push_back(parse_form(line, fx.chart));
    }
    if (!have_chart) throw SyntaxError("empty fixture", 0);
    return fx;
}

} // namespace eds

#endif
