#include "singode/expr.hpp"

#include "singode/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <vector>

namespace singode::expr {

struct Expr::Node {
    NodeKind kind;
    std::string literal;
    double value = 0.0;
    long double long_value = 0.0L;
    Constant constant = Constant::E;
    Function function = Function::Sin;
    std::optional<Expr> a;
    std::optional<Expr> b;
    std::size_t depth = 1;
};

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 6> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"abs", Function::Abs},
    {"sqrt", Function::Sqrt},
}};

bool is_binary(NodeKind k) {
    return k == NodeKind::Add || k == NodeKind::Subtract || k == NodeKind::Multiply || k == NodeKind::Divide ||
           k == NodeKind::Power;
}

}  // namespace

std::string_view name(Function f) noexcept {
    for (const auto& [text, fn] : kFunctions)
        if (fn == f) return text;
    return "?";
}

std::string_view name(Constant c) noexcept { return c == Constant::E ? "e" : "pi"; }

Expr Expr::number(std::string decimal) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Number;
    parse_decimal(decimal);  // validates
    node->value = std::strtod(decimal.c_str(), nullptr);
    node->long_value = std::strtold(decimal.c_str(), nullptr);
    node->literal = std::move(decimal);
    return Expr(std::move(node));
}

Expr Expr::variable() {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Variable;
    return Expr(std::move(node));
}

Expr Expr::constant(Constant c) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Constant;
    node->constant = c;
    return Expr(std::move(node));
}

Expr Expr::negate(Expr operand) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Negate;
    node->depth = operand.depth() + 1;
    node->a = std::move(operand);
    return Expr(std::move(node));
}

Expr Expr::binary(NodeKind op, Expr lhs, Expr rhs) {
    if (!is_binary(op)) throw Error("Expr::binary: not a binary operator");
    auto node = std::make_shared<Node>();
    node->kind = op;
    node->depth = std::max(lhs.depth(), rhs.depth()) + 1;
    node->a = std::move(lhs);
    node->b = std::move(rhs);
    return Expr(std::move(node));
}

Expr Expr::call(Function f, Expr argument) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Call;
    node->function = f;
    node->depth = argument.depth() + 1;
    node->a = std::move(argument);
    return Expr(std::move(node));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }

const std::string& Expr::literal() const {
    if (node_->kind != NodeKind::Number) throw Error("Expr::literal: not a number");
    return node_->literal;
}

double Expr::literal_value() const {
    if (node_->kind != NodeKind::Number) throw Error("Expr::literal_value: not a number");
    return node_->value;
}

long double Expr::literal_long_value() const {
    if (node_->kind != NodeKind::Number) throw Error("Expr::literal_long_value: not a number");
    return node_->long_value;
}

Constant Expr::constant_id() const {
    if (node_->kind != NodeKind::Constant) throw Error("Expr::constant_id: not a constant");
    return node_->constant;
}

Function Expr::function_id() const {
    if (node_->kind != NodeKind::Call) throw Error("Expr::function_id: not a call");
    return node_->function;
}

const Expr& Expr::operand() const {
    if (node_->kind != NodeKind::Negate && node_->kind != NodeKind::Call) throw Error("Expr::operand: not unary");
    return *node_->a;
}

const Expr& Expr::lhs() const {
    if (!is_binary(node_->kind)) throw Error("Expr::lhs: not binary");
    return *node_->a;
}

const Expr& Expr::rhs() const {
    if (!is_binary(node_->kind)) throw Error("Expr::rhs: not binary");
    return *node_->b;
}

std::size_t Expr::depth() const noexcept { return node_->depth; }

bool operator==(const Expr& a, const Expr& b) noexcept {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case NodeKind::Number: return x.literal == y.literal;
        case NodeKind::Variable: return true;
        case NodeKind::Constant: return x.constant == y.constant;
        case NodeKind::Negate: return *x.a == *y.a;
        case NodeKind::Call: return x.function == y.function && *x.a == *y.a;
        default: return *x.a == *y.a && *x.b == *y.b;
    }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            fail({"expression"});
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) fail({"operator", "end of input"});
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    std::string describe_current() {
        skip_ws();
        if (pos_ >= src_.size()) return "end of input";
        return "'" + std::string(1, src_[pos_]) + "'";
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        const std::string found = describe_current();
        throw SyntaxError(pos_, std::move(expected), found);
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (peek('+')) {
                ++pos_;
                lhs = Expr::binary(NodeKind::Add, lhs, parse_term());
            } else if (peek('-')) {
                ++pos_;
                lhs = Expr::binary(NodeKind::Subtract, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                lhs = Expr::binary(NodeKind::Multiply, lhs, parse_factor());
            } else if (peek('/')) {
                ++pos_;
                lhs = Expr::binary(NodeKind::Divide, lhs, parse_factor());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_factor() {
        if (peek('-')) {
            ++pos_;
            return Expr::negate(parse_factor());
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (peek('^')) {
            ++pos_;
            return Expr::binary(NodeKind::Power, base, parse_factor());
        }
        return base;
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ == start + 1 && src_[start] == '.') {
            pos_ = start;
            fail({"digit"});
        }
        // Exponent only when digits follow; otherwise 'e' is left for the caller.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && is_digit(src_[look])) {
                pos_ = look;
                while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
            }
        }
        return Expr::number(std::string(src_.substr(start, pos_ - start)));
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail({"number", "'x'", "'e'", "'pi'", "function", "'('", "'-'"});
        const char c = src_[pos_];
        if (is_digit(c) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (!peek(')')) fail({"')'"});
            ++pos_;
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string_view word = src_.substr(start, pos_ - start);
            if (word == "x") return Expr::variable();
            if (word == "e") return Expr::constant(Constant::E);
            if (word == "pi") return Expr::constant(Constant::Pi);
            for (const auto& [text, fn] : kFunctions) {
                if (word == text) {
                    if (!peek('(')) fail({"'('"});
                    ++pos_;
                    Expr arg = parse_expr();
                    if (!peek(')')) fail({"')'"});
                    ++pos_;
                    return Expr::call(fn, arg);
                }
            }
            throw UnknownIdentifier(start, std::string(word));
        }
        fail({"number", "'x'", "'e'", "'pi'", "function", "'('", "'-'"});
    }
};

// ---------------------------------------------------------------------------
// Printer

// Binding levels: sum 1, product 2, factor (negation) 3, power 4, atom 5.
int level(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Add:
        case NodeKind::Subtract: return 1;
        case NodeKind::Multiply:
        case NodeKind::Divide: return 2;
        case NodeKind::Negate: return 3;
        case NodeKind::Power: return 4;
        default: return 5;
    }
}

void print(const Expr& e, std::string& out);

void print_at_least(const Expr& e, int min_level, std::string& out) {
    if (level(e) < min_level) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case NodeKind::Number: out += e.literal(); return;
        case NodeKind::Variable: out += 'x'; return;
        case NodeKind::Constant: out += name(e.constant_id()); return;
        case NodeKind::Negate:
            out += '-';
            print_at_least(e.operand(), 3, out);
            return;
        case NodeKind::Call:
            out += name(e.function_id());
            out += '(';
            print(e.operand(), out);
            out += ')';
            return;
        case NodeKind::Add:
        case NodeKind::Subtract:
            print_at_least(e.lhs(), 1, out);
            out += e.kind() == NodeKind::Add ? " + " : " - ";
            print_at_least(e.rhs(), 2, out);
            return;
        case NodeKind::Multiply:
        case NodeKind::Divide:
            print_at_least(e.lhs(), 2, out);
            out += e.kind() == NodeKind::Multiply ? '*' : '/';
            print_at_least(e.rhs(), 3, out);
            return;
        case NodeKind::Power:
            print_at_least(e.lhs(), 5, out);
            out += '^';
            print_at_least(e.rhs(), 3, out);
            return;
    }
}

// ---------------------------------------------------------------------------
// Evaluation

template <class T>
struct Arith;

template <>
struct Arith<double> {
    static double literal(const Expr& e) { return e.literal_value(); }
    static double constant(Constant c) { return c == Constant::E ? std::numbers::e : std::numbers::pi; }
    static bool is_integer(double p) { return std::floor(p) == p && std::fabs(p) < 9.007199254740992e15; }
};

template <>
struct Arith<long double> {
    static long double literal(const Expr& e) { return e.literal_long_value(); }
    static long double constant(Constant c) {
        return c == Constant::E ? std::numbers::e_v<long double> : std::numbers::pi_v<long double>;
    }
    static bool is_integer(long double p) { return std::floor(p) == p && std::fabs(p) < 1.8e19L; }
};

template <>
struct Arith<BigReal> {
    static BigReal literal(const Expr& e) { return BigReal(e.literal()); }
    static BigReal constant(Constant c) {
        if (c == Constant::E) return exp(BigReal(1));
        return boost::math::constants::pi<BigReal>();
    }
    static bool is_integer(const BigReal& p) { return floor(p) == p; }
};

template <class T>
T eval(const Expr& e, const T& x) {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;

    switch (e.kind()) {
        case NodeKind::Number: return Arith<T>::literal(e);
        case NodeKind::Variable: return x;
        case NodeKind::Constant: return Arith<T>::constant(e.constant_id());
        case NodeKind::Negate: return T(-eval(e.operand(), x));
        case NodeKind::Add: return T(eval(e.lhs(), x) + eval(e.rhs(), x));
        case NodeKind::Subtract: return T(eval(e.lhs(), x) - eval(e.rhs(), x));
        case NodeKind::Multiply: return T(eval(e.lhs(), x) * eval(e.rhs(), x));
        case NodeKind::Divide: {
            const T num = eval(e.lhs(), x);
            const T den = eval(e.rhs(), x);
            if (den == 0) throw DomainError("division by zero", to_string(e));
            return T(num / den);
        }
        case NodeKind::Power: {
            const T base = eval(e.lhs(), x);
            const T p = eval(e.rhs(), x);
            if (base == 0 && p < 0) throw DomainError("division by zero", to_string(e));
            if (Arith<T>::is_integer(p)) return T(pow(base, p));
            return T(pow(T(abs(base)), p));
        }
        case NodeKind::Call: {
            const T arg = eval(e.operand(), x);
            switch (e.function_id()) {
                case Function::Sin: return T(sin(arg));
                case Function::Cos: return T(cos(arg));
                case Function::Exp: return T(exp(arg));
                case Function::Abs: return T(abs(arg));
                case Function::Ln:
                    if (!(arg > 0)) throw DomainError("logarithm of a non-positive value", to_string(e));
                    return T(log(arg));
                case Function::Sqrt:
                    if (arg < 0) throw DomainError("square root of a negative value", to_string(e));
                    return T(sqrt(arg));
            }
            break;
        }
    }
    throw Error("evaluate: corrupt expression node");
}

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

double evaluate(const Expr& e, double x) { return eval(e, x); }

long double evaluate(const Expr& e, long double x) { return eval(e, x); }

BigReal evaluate(const Expr& e, const BigReal& x) { return eval(e, x); }

double evaluate(const Expr& e, double x, Precision precision) {
    if (precision.is_native()) return eval(e, x);
    ScopedPrecision scope(precision);
    return eval(e, BigReal(x)).convert_to<double>();
}

}  // namespace singode::expr
