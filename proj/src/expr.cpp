#include "e3top/expr.hpp"

#include <charconv>
#include <cmath>
#include <cctype>

namespace e3top::expr {

namespace detail {

enum class Kind { Const, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sqrt, Sin, Cos, Exp, Ln, Abs };

struct Node {
    Kind kind;
    double value = 0;
    Var var = Var::A;
    Fn fn = Fn::Sqrt;
    std::shared_ptr<const Node> a, b;
};

using NodeP = std::shared_ptr<const Node>;

NodeP node_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = v;
    return n;
}

NodeP node_var(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->var = v;
    return n;
}

NodeP node_unary(Kind k, NodeP a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

NodeP node_bin(Kind k, NodeP a, NodeP b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodeP node_call(Fn f, NodeP a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->fn = f;
    n->a = std::move(a);
    return n;
}

bool is_const(const NodeP& n, double v) {
    return n->kind == Kind::Const && n->value == v;
}

// Folding constructors used when building derivative trees.  Only
// identities that keep values intact where both sides are defined.
NodeP mk_add(NodeP a, NodeP b) {
    if (a->kind == Kind::Const && b->kind == Kind::Const)
        return node_const(a->value + b->value);
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    return node_bin(Kind::Add, std::move(a), std::move(b));
}

NodeP mk_sub(NodeP a, NodeP b) {
    if (a->kind == Kind::Const && b->kind == Kind::Const)
        return node_const(a->value - b->value);
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return node_unary(Kind::Neg, std::move(b));
    return node_bin(Kind::Sub, std::move(a), std::move(b));
}

NodeP mk_mul(NodeP a, NodeP b) {
    if (a->kind == Kind::Const && b->kind == Kind::Const)
        return node_const(a->value * b->value);
    if (is_const(a, 0) || is_const(b, 0)) return node_const(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    return node_bin(Kind::Mul, std::move(a), std::move(b));
}

NodeP mk_div(NodeP a, NodeP b) {
    if (is_const(b, 1)) return a;
    if (is_const(a, 0)) return node_const(0);
    return node_bin(Kind::Div, std::move(a), std::move(b));
}

NodeP mk_pow(NodeP a, NodeP b) {
    if (is_const(b, 1)) return a;
    if (is_const(b, 0)) return node_const(1);
    return node_bin(Kind::Pow, std::move(a), std::move(b));
}

NodeP mk_neg(NodeP a) {
    if (a->kind == Kind::Const) return node_const(-a->value);
    return node_unary(Kind::Neg, std::move(a));
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sqrt: return "sqrt";
        case Fn::Sin:  return "sin";
        case Fn::Cos:  return "cos";
        case Fn::Exp:  return "exp";
        case Fn::Ln:   return "ln";
        case Fn::Abs:  return "abs";
    }
    return "?";
}

void render(const NodeP& n, std::string& out) {
    switch (n->kind) {
        case Kind::Const: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            out += buf;
            break;
        }
        case Kind::Variable:
            out += (n->var == Var::A ? 'a' : 'x');
            break;
        case Kind::Neg:
            out += "(-";
            render(n->a, out);
            out += ')';
            break;
        case Kind::Call:
            out += fn_name(n->fn);
            out += '(';
            render(n->a, out);
            out += ')';
            break;
        default: {
            char op = '?';
            switch (n->kind) {
                case Kind::Add: op = '+'; break;
                case Kind::Sub: op = '-'; break;
                case Kind::Mul: op = '*'; break;
                case Kind::Div: op = '/'; break;
                case Kind::Pow: op = '^'; break;
                default: break;
            }
            out += '(';
            render(n->a, out);
            out += op;
            render(n->b, out);
            out += ')';
        }
    }
}

std::string render(const NodeP& n) {
    std::string s;
    render(n, s);
    return s;
}

[[noreturn]] void domain_fail(const NodeP& n, const char* what) {
    throw DomainError(std::string(what) + " in sub-expression " + render(n));
}

double eval(const NodeP& n, double a, double x) {
    switch (n->kind) {
        case Kind::Const: return n->value;
        case Kind::Variable: return n->var == Var::A ? a : x;
        case Kind::Neg: return -eval(n->a, a, x);
        case Kind::Add: return eval(n->a, a, x) + eval(n->b, a, x);
        case Kind::Sub: return eval(n->a, a, x) - eval(n->b, a, x);
        case Kind::Mul: return eval(n->a, a, x) * eval(n->b, a, x);
        case Kind::Div: {
            double u = eval(n->a, a, x), v = eval(n->b, a, x);
            if (v == 0) domain_fail(n, "division by zero");
            return u / v;
        }
        case Kind::Pow: {
            double u = eval(n->a, a, x), v = eval(n->b, a, x);
            if (u < 0 && v != std::nearbyint(v))
                domain_fail(n, "negative base with non-integer exponent");
            if (u == 0 && v < 0) domain_fail(n, "zero base with negative exponent");
            return std::pow(u, v);
        }
        case Kind::Call: {
            double u = eval(n->a, a, x);
            switch (n->fn) {
                case Fn::Sqrt:
                    if (u < 0) domain_fail(n, "sqrt of negative argument");
                    return std::sqrt(u);
                case Fn::Sin: return std::sin(u);
                case Fn::Cos: return std::cos(u);
                case Fn::Exp: return std::exp(u);
                case Fn::Ln:
                    if (u <= 0) domain_fail(n, "ln of non-positive argument");
                    return std::log(u);
                case Fn::Abs: return std::fabs(u);
            }
        }
    }
    return 0;  // unreachable
}

NodeP diff(const NodeP& n, Var v) {
    switch (n->kind) {
        case Kind::Const: return node_const(0);
        case Kind::Variable: return node_const(n->var == v ? 1 : 0);
        case Kind::Neg: return mk_neg(diff(n->a, v));
        case Kind::Add: return mk_add(diff(n->a, v), diff(n->b, v));
        case Kind::Sub: return mk_sub(diff(n->a, v), diff(n->b, v));
        case Kind::Mul:
            return mk_add(mk_mul(diff(n->a, v), n->b), mk_mul(n->a, diff(n->b, v)));
        case Kind::Div:
            return mk_div(mk_sub(mk_mul(diff(n->a, v), n->b), mk_mul(n->a, diff(n->b, v))),
                          mk_pow(n->b, node_const(2)));
        case Kind::Pow: {
            if (n->b->kind == Kind::Const) {
                double c = n->b->value;
                return mk_mul(mk_mul(node_const(c), mk_pow(n->a, node_const(c - 1))),
                              diff(n->a, v));
            }
            // u^w -> u^w * (w' ln u + w u'/u)
            return mk_mul(node_bin(Kind::Pow, n->a, n->b),
                          mk_add(mk_mul(diff(n->b, v), node_call(Fn::Ln, n->a)),
                                 mk_mul(n->b, mk_div(diff(n->a, v), n->a))));
        }
        case Kind::Call: {
            NodeP du = diff(n->a, v);
            switch (n->fn) {
                case Fn::Sqrt:
                    return mk_div(du, mk_mul(node_const(2), node_call(Fn::Sqrt, n->a)));
                case Fn::Sin: return mk_mul(node_call(Fn::Cos, n->a), du);
                case Fn::Cos: return mk_neg(mk_mul(node_call(Fn::Sin, n->a), du));
                case Fn::Exp: return mk_mul(node_call(Fn::Exp, n->a), du);
                case Fn::Ln:  return mk_div(du, n->a);
                case Fn::Abs:
                    // sign(u) * u', with the x=0 case left to evaluation
                    return mk_mul(mk_div(n->a, node_call(Fn::Abs, n->a)), du);
            }
        }
    }
    return node_const(0);  // unreachable
}

// ---------------------------------------------------------------- parser

struct Parser {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    [[noreturn]] void fail(const std::string& expected) {
        throw ParseError("expected " + expected + " at offset " + std::to_string(i), i);
    }

    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }

    NodeP expr() {
        NodeP lhs = term();
        for (;;) {
            skip_ws();
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
                char op = s[i++];
                NodeP rhs = term();
                lhs = node_bin(op == '+' ? Kind::Add : Kind::Sub, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    NodeP term() {
        NodeP lhs = unary();
        for (;;) {
            skip_ws();
            if (i < s.size() && (s[i] == '*' || s[i] == '/')) {
                char op = s[i++];
                NodeP rhs = unary();
                lhs = node_bin(op == '*' ? Kind::Mul : Kind::Div, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    NodeP unary() {
        skip_ws();
        if (i < s.size() && s[i] == '-') {
            ++i;
            return node_unary(Kind::Neg, unary());
        }
        return power();
    }

    NodeP power() {
        NodeP base = atom();
        skip_ws();
        if (i < s.size() && s[i] == '^') {
            ++i;
            // right-associative; exponent may carry a unary minus
            return node_bin(Kind::Pow, base, unary());
        }
        return base;
    }

    NodeP atom() {
        skip_ws();
        if (i >= s.size()) fail("a number, variable, function, or '('");
        char c = s[i];
        if (c == '(') {
            ++i;
            NodeP inner = expr();
            if (!eat(')')) fail("')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0;
            const char* first = s.data() + i;
            const char* last = s.data() + s.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr == first) fail("a number");
            i += static_cast<std::size_t>(ptr - first);
            return node_const(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            std::string_view id = s.substr(start, i - start);
            if (id == "a") return node_var(Var::A);
            if (id == "x") return node_var(Var::X);
            Fn fn;
            if (id == "sqrt") fn = Fn::Sqrt;
            else if (id == "sin") fn = Fn::Sin;
            else if (id == "cos") fn = Fn::Cos;
            else if (id == "exp") fn = Fn::Exp;
            else if (id == "ln") fn = Fn::Ln;
            else if (id == "abs") fn = Fn::Abs;
            else {
                i = start;
                throw ParseError("unknown identifier '" + std::string(id) +
                                 "' at offset " + std::to_string(start) +
                                 " (only a, x, sqrt, sin, cos, exp, ln, abs)", start);
            }
            if (!eat('(')) fail("'(' after function name");
            NodeP arg = expr();
            if (!eat(')')) fail("')'");
            return node_call(fn, arg);
        }
        fail("a number, variable, function, or '('");
    }
};

}  // namespace detail

Expr make_expr(detail::NodeP n) { return Expr(std::move(n)); }

Expr::Expr() : node_(detail::node_const(0)) {}

Expr Expr::constant(double v) { return make_expr(detail::node_const(v)); }

Expr Expr::variable(Var v) { return make_expr(detail::node_var(v)); }

Expr Expr::parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty expression", 0);
    detail::Parser p{text};
    detail::NodeP n = p.expr();
    p.skip_ws();
    if (p.i != text.size()) p.fail("end of input");
    return make_expr(std::move(n));
}

double Expr::eval(double a, double x) const { return detail::eval(node_, a, x); }

Expr Expr::diff(Var v) const { return make_expr(detail::diff(node_, v)); }

std::string Expr::str() const { return detail::render(node_); }

bool Expr::is_literal(double v) const { return detail::is_const(node_, v); }

}  // namespace e3top::expr
