#include "koranyi/expression.hpp"
#include "koranyi/errors.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>

namespace koranyi {

namespace {

using Fn = std::function<double(double, double)>;  // (r2, t) -> value

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ConfigError("expression", what + " at position " + std::to_string(pos) +
                                            " in '" + s + "'");
    }

    Fn expr() {
        Fn acc = term();
        for (;;) {
            if (eat('+')) {
                Fn rhs = term();
                acc = [acc, rhs](double r2, double t) { return acc(r2, t) + rhs(r2, t); };
            } else if (eat('-')) {
                Fn rhs = term();
                acc = [acc, rhs](double r2, double t) { return acc(r2, t) - rhs(r2, t); };
            } else {
                return acc;
            }
        }
    }

    Fn term() {
        Fn acc = factor();
        for (;;) {
            if (eat('*')) {
                Fn rhs = factor();
                acc = [acc, rhs](double r2, double t) { return acc(r2, t) * rhs(r2, t); };
            } else if (eat('/')) {
                Fn rhs = factor();
                acc = [acc, rhs](double r2, double t) { return acc(r2, t) / rhs(r2, t); };
            } else {
                return acc;
            }
        }
    }

    Fn factor() {
        if (eat('-')) {
            Fn inner = factor();
            return [inner](double r2, double t) { return -inner(r2, t); };
        }
        return power();
    }

    Fn power() {
        Fn base = atom();
        if (eat('^')) {
            skip();
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (start == pos) fail("expected an unsigned integer exponent");
            const int e = std::stoi(s.substr(start, pos - start));
            return [base, e](double r2, double t) { return std::pow(base(r2, t), e); };
        }
        return base;
    }

    Fn atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end of expression");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s.substr(pos), &used);
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos += used;
            return [v](double, double) { return v; };
        }
        if (s.compare(pos, 4, "sqrt") == 0) {
            pos += 4;
            if (!eat('(')) fail("expected '(' after sqrt");
            Fn inner = expr();
            if (!eat(')')) fail("expected ')'");
            return [inner](double r2, double t) { return std::sqrt(inner(r2, t)); };
        }
        if (s.compare(pos, 2, "r2") == 0) {
            pos += 2;
            return [](double r2, double) { return r2; };
        }
        if (c == 't') {
            ++pos;
            return [](double, double t) { return t; };
        }
        if (eat('(')) {
            Fn inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        fail("unexpected token");
    }
};

} // namespace

ScalarField parse_circular_expression(const std::string& text, int n) {
    Parser p(text);
    Fn fn = p.expr();
    p.skip();
    if (p.pos != text.size())
        throw ConfigError("expression", "trailing input at position " + std::to_string(p.pos) +
                                            " in '" + text + "'");
    return make_field(n,
                      [fn](const HPoint& q) { return Complex(fn(q.zmod2(), q.t), 0.0); },
                      true);
}

} // namespace koranyi
