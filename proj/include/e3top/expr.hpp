#ifndef E3TOP_EXPR_HPP
#define E3TOP_EXPR_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace e3top::expr {

/// Thrown by Expr::parse on malformed input; `offset` is the byte position
/// in the source text at which the problem was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }
private:
    std::size_t offset_;
};

/// Thrown by Expr::eval when a sub-expression is evaluated outside its
/// domain (division by zero, sqrt/ln of a non-positive argument, ...).
/// The message names the offending sub-expression.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Var { A, X };

namespace detail { struct Node; }

/// Immutable scalar expression in the variables `a` and `x`.
///
/// Grammar: real literals, `a`, `x`, binary + - * / ^ (all left-associative
/// except ^, which is right-associative and binds tighter than unary minus),
/// unary minus, parentheses, and the functions sqrt, sin, cos, exp, ln, abs.
/// Whitespace is insignificant.
class Expr {
public:
    Expr();  // the zero constant

    static Expr constant(double v);
    static Expr variable(Var v);
    static Expr parse(std::string_view text);

    double eval(double a, double x) const;

    /// Exact symbolic derivative; apply twice for second derivatives.
    Expr diff(Var v) const;
    Expr diff_x() const { return diff(Var::X); }
    Expr diff_a() const { return diff(Var::A); }

    /// Parseable infix rendering (fully parenthesized).
    std::string str() const;

    /// True iff the root node is the literal constant `v`.
    bool is_literal(double v) const;

private:
    explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;
    friend struct detail::Node;
    friend Expr make_expr(std::shared_ptr<const detail::Node>);
};

}  // namespace e3top::expr

#endif
