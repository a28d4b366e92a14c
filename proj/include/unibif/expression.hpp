#pragma once

/**
 * @file expression.hpp
 * @brief Arithmetic mini-language for user-defined families f_t(x).
 *
 *   expr    = term { ("+" | "-") term } ;
 *   term    = unary { ("*" | "/") unary } ;
 *   unary   = ("+" | "-") unary | power ;
 *   power   = primary [ "^" unary ] ;              (right associative)
 *   primary = number | "t" | "x" | "pi" | "e"
 *           | func "(" expr ")" | "(" expr ")" ;
 *   func    = "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" ;
 *
 * Whitespace is ignored.  Integer exponents are evaluated by repeated
 * multiplication so that x^2 stays exact.
 */

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "unibif/symbolic.hpp"

namespace unibif {

class Expression {
public:
    static Expression parse(std::string_view text) {
        Parser p{text, 0, {}};
        Expression e;
        e.root_ = p.expr();
        p.skip();
        if (p.pos != text.size()) throw ParseError("trailing input in expression", p.pos);
        e.nodes_ = std::move(p.nodes);
        e.text_ = std::string(text);
        return e;
    }

    double operator()(double t, double x) const { return eval(root_, t, x); }
    const std::string& text() const noexcept { return text_; }

private:
    enum class Op { Num, T, X, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt, Abs };
    struct Node {
        Op op;
        double value = 0.0;
        int lhs = -1;
        int rhs = -1;
    };

    struct Parser {
        std::string_view s;
        std::size_t pos;
        std::vector<Node> nodes;

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool accept(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        int add(Node n) {
            nodes.push_back(n);
            return static_cast<int>(nodes.size()) - 1;
        }
        int expr() {
            int l = term();
            for (;;) {
                if (accept('+')) l = add({Op::Add, 0, l, term()});
                else if (accept('-')) l = add({Op::Sub, 0, l, term()});
                else return l;
            }
        }
        int term() {
            int l = unary();
            for (;;) {
                if (accept('*')) l = add({Op::Mul, 0, l, unary()});
                else if (accept('/')) l = add({Op::Div, 0, l, unary()});
                else return l;
            }
        }
        int unary() {
            if (accept('-')) return add({Op::Neg, 0, unary(), -1});
            if (accept('+')) return unary();
            return power();
        }
        int power() {
            int base = primary();
            if (accept('^')) return add({Op::Pow, 0, base, unary()});
            return base;
        }
        int primary() {
            skip();
            if (pos >= s.size()) throw ParseError("unexpected end of expression", pos);
            const char c = s[pos];
            if (accept('(')) {
                int e = expr();
                if (!accept(')')) throw ParseError("expected ')'", pos);
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::string buf(s.substr(pos));
                char* end = nullptr;
                const double v = std::strtod(buf.c_str(), &end);
                if (end == buf.c_str()) throw ParseError("bad number", pos);
                pos += static_cast<std::size_t>(end - buf.c_str());
                return add({Op::Num, v});
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                const std::size_t start = pos;
                while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
                const std::string_view id = s.substr(start, pos - start);
                if (id == "t") return add({Op::T});
                if (id == "x") return add({Op::X});
                if (id == "pi") return add({Op::Num, 3.14159265358979323846});
                if (id == "e") return add({Op::Num, 2.71828182845904523536});
                Op f;
                if (id == "sin") f = Op::Sin;
                else if (id == "cos") f = Op::Cos;
                else if (id == "exp") f = Op::Exp;
                else if (id == "log") f = Op::Log;
                else if (id == "sqrt") f = Op::Sqrt;
                else if (id == "abs") f = Op::Abs;
                else throw ParseError("unknown identifier '" + std::string(id) + "'", start);
                if (!accept('(')) throw ParseError("expected '(' after function name", pos);
                int arg = expr();
                if (!accept(')')) throw ParseError("expected ')'", pos);
                return add({f, 0, arg, -1});
            }
            throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
    };

    double eval(int i, double t, double x) const {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        switch (n.op) {
            case Op::Num: return n.value;
            case Op::T: return t;
            case Op::X: return x;
            case Op::Add: return eval(n.lhs, t, x) + eval(n.rhs, t, x);
            case Op::Sub: return eval(n.lhs, t, x) - eval(n.rhs, t, x);
            case Op::Mul: return eval(n.lhs, t, x) * eval(n.rhs, t, x);
            case Op::Div: return eval(n.lhs, t, x) / eval(n.rhs, t, x);
            case Op::Neg: return -eval(n.lhs, t, x);
            case Op::Pow: {
                const double b = eval(n.lhs, t, x);
                const Node& e = nodes_[static_cast<std::size_t>(n.rhs)];
                if (e.op == Op::Num && e.value == std::floor(e.value) && std::abs(e.value) <= 16) {
                    double r = 1.0;
                    for (int k = 0; k < static_cast<int>(std::abs(e.value)); ++k) r *= b;
                    return e.value < 0 ? 1.0 / r : r;
                }
                return std::pow(b, eval(n.rhs, t, x));
            }
            case Op::Sin: return std::sin(eval(n.lhs, t, x));
            case Op::Cos: return std::cos(eval(n.lhs, t, x));
            case Op::Exp: return std::exp(eval(n.lhs, t, x));
            case Op::Log: return std::log(eval(n.lhs, t, x));
            case Op::Sqrt: return std::sqrt(eval(n.lhs, t, x));
            case Op::Abs: return std::abs(eval(n.lhs, t, x));
        }
        return 0.0;
    }

    std::vector<Node> nodes_;
    int root_ = -1;
    std::string text_;
};

}  // namespace unibif
