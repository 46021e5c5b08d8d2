#pragma once

#include "singode/numeric_types.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

/// Expression language for coefficient and reference functions of x.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?
///   atom   := number | 'x' | 'e' | 'pi' | ident '(' expr ')' | '(' expr ')'
///   ident  := sin | cos | exp | ln | abs | sqrt
namespace singode::expr {

enum class NodeKind { Number, Variable, Constant, Negate, Add, Subtract, Multiply, Divide, Power, Call };

enum class Constant { E, Pi };

enum class Function { Sin, Cos, Exp, Ln, Abs, Sqrt };

std::string_view name(Function f) noexcept;
std::string_view name(Constant c) noexcept;

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    /// Decimal literal kept verbatim; converted to the working precision when evaluated.
    static Expr number(std::string decimal);
    static Expr variable();
    static Expr constant(Constant c);
    static Expr negate(Expr operand);
    static Expr binary(NodeKind op, Expr lhs, Expr rhs);
    static Expr call(Function f, Expr argument);

    NodeKind kind() const noexcept;
    const std::string& literal() const;
    /// Literal rounded to double / long double.
    double literal_value() const;
    long double literal_long_value() const;
    Constant constant_id() const;
    Function function_id() const;
    /// Operand of Negate or Call.
    const Expr& operand() const;
    const Expr& lhs() const;
    const Expr& rhs() const;

    std::size_t depth() const noexcept;

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b) noexcept;

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Throws SyntaxError (with offset and expected-token set) or UnknownIdentifier.
Expr parse(std::string_view source);

/// Minimal-parenthesis rendering; parse(to_string(e)) == e.
std::string to_string(const Expr& e);

/// `a^p` with integer p keeps the sign of a; with non-integer p it evaluates |a|^p.
/// Throws DomainError naming the offending sub-expression on x/0, 0^negative,
/// ln of a non-positive value and sqrt of a negative value.
double evaluate(const Expr& e, double x);
long double evaluate(const Expr& e, long double x);
/// Evaluated at the precision of the current thread default (see ScopedPrecision).
BigReal evaluate(const Expr& e, const BigReal& x);

/// Evaluates at the requested working precision, rounding the result to double.
double evaluate(const Expr& e, double x, Precision precision);

}  // namespace singode::expr
