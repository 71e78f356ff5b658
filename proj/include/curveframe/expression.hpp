#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curveframe/cubic_spline.hpp"
#include "curveframe/errors.hpp"

namespace curveframe {

namespace expr_detail {

enum class Kind { constant, variable, add, sub, mul, div, pow, neg, call };

enum class Builtin { sin, cos, tan, atan, sqrt, exp, log, abs };

inline const char* builtin_name(Builtin f) {
    switch (f) {
        case Builtin::sin: return "sin";
        case Builtin::cos: return "cos";
        case Builtin::tan: return "tan";
        case Builtin::atan: return "atan";
        case Builtin::sqrt: return "sqrt";
        case Builtin::exp: return "exp";
        case Builtin::log: return "log";
        case Builtin::abs: return "abs";
    }
    return "?";
}

struct Node {
    Kind kind{};
    double value = 0.0;                  // constant
    Builtin fn{};                        // call
    std::unique_ptr<Node> lhs, rhs;      // call/neg use lhs only
};

inline double eval(const Node& node, double s) {
    switch (node.kind) {
        case Kind::constant: return node.value;
        case Kind::variable: return s;
        case Kind::add: return eval(*node.lhs, s) + eval(*node.rhs, s);
        case Kind::sub: return eval(*node.lhs, s) - eval(*node.rhs, s);
        case Kind::mul: return eval(*node.lhs, s) * eval(*node.rhs, s);
        case Kind::div: {
            const double den = eval(*node.rhs, s);
            if (den == 0.0) throw EvaluationError("division by zero", s);
            return eval(*node.lhs, s) / den;
        }
        case Kind::pow: {
            const double r = std::pow(eval(*node.lhs, s), eval(*node.rhs, s));
            if (!std::isfinite(r)) throw EvaluationError("non-finite power", s);
            return r;
        }
        case Kind::neg: return -eval(*node.lhs, s);
        case Kind::call: {
            const double a = eval(*node.lhs, s);
            double r = 0.0;
            switch (node.fn) {
                case Builtin::sin: r = std::sin(a); break;
                case Builtin::cos: r = std::cos(a); break;
                case Builtin::tan: r = std::tan(a); break;
                case Builtin::atan: r = std::atan(a); break;
                case Builtin::sqrt:
                    if (a < 0.0) throw EvaluationError("square root of negative value", s);
                    r = std::sqrt(a);
                    break;
                case Builtin::exp: r = std::exp(a); break;
                case Builtin::log:
                    if (a <= 0.0) throw EvaluationError("log of non-positive value", s);
                    r = std::log(a);
                    break;
                case Builtin::abs: r = std::abs(a); break;
            }
            if (!std::isfinite(r)) throw EvaluationError("non-finite value", s);
            return r;
        }
    }
    throw EvaluationError("corrupt expression node", s);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Fully parenthesized text; re-parsing it yields an evaluation-identical tree.
inline void print(const Node& node, std::string& out) {
    switch (node.kind) {
        case Kind::constant: out += format_double(node.value); return;
        case Kind::variable: out += 's'; return;
        case Kind::neg:
            out += "(-";
            print(*node.lhs, out);
            out += ')';
            return;
        case Kind::call:
            out += builtin_name(node.fn);
            out += '(';
            print(*node.lhs, out);
            out += ')';
            return;
        default: break;
    }
    const char op = node.kind == Kind::add   ? '+'
                    : node.kind == Kind::sub ? '-'
                    : node.kind == Kind::mul ? '*'
                    : node.kind == Kind::div ? '/'
                                             : '^';
    out += '(';
    print(*node.lhs, out);
    out += op;
    print(*node.rhs, out);
    out += ')';
}

// Recursive descent over: expr := term (('+'|'-') term)*
//                         term := unary (('*'|'/') unary)*
//                         unary := '-' unary | power
//                         power := atom ('^' unary)?
// '^' is right associative; unary minus binds looser, so -2^2 = -(2^2).
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::unique_ptr<Node> run() {
        auto root = expr();
        skip_space();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    std::unique_ptr<Node> make(Kind k, std::unique_ptr<Node> l, std::unique_ptr<Node> r = nullptr) {
        auto n = std::make_unique<Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    std::unique_ptr<Node> expr() {
        auto left = term();
        for (;;) {
            if (accept('+'))
                left = make(Kind::add, std::move(left), term());
            else if (accept('-'))
                left = make(Kind::sub, std::move(left), term());
            else
                return left;
        }
    }

    std::unique_ptr<Node> term() {
        auto left = unary();
        for (;;) {
            if (accept('*'))
                left = make(Kind::mul, std::move(left), unary());
            else if (accept('/'))
                left = make(Kind::div, std::move(left), unary());
            else
                return left;
        }
    }

    std::unique_ptr<Node> unary() {
        if (accept('-')) return make(Kind::neg, unary());
        return power();
    }

    std::unique_ptr<Node> power() {
        auto base = atom();
        if (accept('^')) return make(Kind::pow, std::move(base), unary());
        return base;
    }

    std::unique_ptr<Node> atom() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];

        if (c == '(') {
            ++pos_;
            auto inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }

        if ((c >= '0' && c <= '9') || c == '.') return number();

        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return identifier();

        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::unique_ptr<Node> number() {
        double v = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(ptr - begin);
        auto n = std::make_unique<Node>();
        n->kind = Kind::constant;
        n->value = v;
        return n;
    }

    std::unique_ptr<Node> identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                              (c >= '0' && c <= '9') || c == '_';
            if (!word) break;
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name == "s") {
            auto n = std::make_unique<Node>();
            n->kind = Kind::variable;
            return n;
        }

        static constexpr std::pair<std::string_view, Builtin> table[] = {
            {"sin", Builtin::sin},   {"cos", Builtin::cos}, {"tan", Builtin::tan},
            {"atan", Builtin::atan}, {"sqrt", Builtin::sqrt}, {"exp", Builtin::exp},
            {"log", Builtin::log},   {"abs", Builtin::abs}};
        for (const auto& [fname, fn] : table) {
            if (name == fname) {
                if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
                auto arg = expr();
                if (!accept(')')) throw ParseError("expected ')'", pos_);
                auto n = std::make_unique<Node>();
                n->kind = Kind::call;
                n->fn = fn;
                n->lhs = std::move(arg);
                return n;
            }
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
};

}  // namespace expr_detail

// A deterministic scalar map s -> f(s): either a parsed expression in the
// variable s, a constant, or a cubic-spline interpolant over tabulated data.
// Immutable after construction; copies share the underlying representation.
class ScalarFunction {
public:
    ScalarFunction() = default;

    static ScalarFunction parse(std::string_view text) {
        ScalarFunction f;
        f.ast_ = std::shared_ptr<const expr_detail::Node>(expr_detail::Parser(text).run().release());
        return f;
    }

    static ScalarFunction constant(double v) {
        ScalarFunction f;
        f.constant_ = v;
        return f;
    }

    static ScalarFunction tabulated(std::vector<double> s, std::vector<double> values,
                                    CubicSpline::End end = CubicSpline::End::not_a_knot) {
        ScalarFunction f;
        f.table_ = std::make_shared<const CubicSpline>(std::move(s), std::move(values), end);
        return f;
    }

    double operator()(double s) const {
        if (table_) return table_->value(s);
        if (ast_) return expr_detail::eval(*ast_, s);
        return constant_;
    }

    bool is_tabulated() const { return table_ != nullptr; }

    // Analytic derivative of the tabulated interpolant (orders 1 and 2).
    // Expression and constant forms return nullopt: they are differentiated
    // on grids by the callers that need it.
    std::optional<double> interpolant_derivative(double s, int order) const {
        if (!table_) return std::nullopt;
        if (order == 1) return table_->deriv(s);
        if (order == 2) return table_->deriv2(s);
        throw InvalidOrder("interpolant derivative order must be 1 or 2");
    }

    // Parseable for expression/constant forms; descriptive for tabulated data.
    std::string text() const {
        if (table_) return "tabulated[" + std::to_string(table_->knots().size()) + "]";
        if (ast_) {
            std::string out;
            expr_detail::print(*ast_, out);
            return out;
        }
        return expr_detail::format_double(constant_);
    }

private:
    std::shared_ptr<const expr_detail::Node> ast_;
    std::shared_ptr<const CubicSpline> table_;
    double constant_ = 0.0;
};

}  // namespace curveframe
