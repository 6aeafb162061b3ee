#pragma once
// Small arithmetic expression language used for custom warps, profiles,
// boundary data and numeric config values.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' unary)?            (right associative)
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
//
// Names: variables r, theta (alias t); constants pi, e.
// Functions: exp log sqrt sin cos tan sinh cosh tanh abs.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace warplab {

class ExpressionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Expression {
public:
    Expression() = default;

    static Expression parse(std::string_view text) {
        Parser p{text, 0};
        auto root = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size())
            throw ExpressionError("unexpected '" + std::string(text.substr(p.pos, 1)) +
                                  "' at position " + std::to_string(p.pos) + " in \"" +
                                  std::string(text) + "\"");
        Expression e;
        e.root_ = std::move(root);
        e.source_ = std::string(text);
        return e;
    }

    double operator()(double r, double theta) const {
        if (!root_) throw ExpressionError("empty expression");
        return eval(*root_, r, theta);
    }

    // True when the expression mentions r or theta.
    bool depends_on_r() const { return root_ && mentions(*root_, Var::r); }
    bool depends_on_theta() const { return root_ && mentions(*root_, Var::theta); }

    const std::string& source() const { return source_; }

private:
    enum class Var { r, theta };
    enum class Fn { exp, log, sqrt, sin, cos, tan, sinh, cosh, tanh, abs };
    enum class Op { add, sub, mul, div, pow };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Number { double value; };
    struct Variable { Var var; };
    struct Call { Fn fn; NodePtr arg; };
    struct Negate { NodePtr arg; };
    struct Binary { Op op; NodePtr lhs, rhs; };
    struct Node { std::variant<Number, Variable, Call, Negate, Binary> v; };

    static double apply(Fn fn, double x) {
        switch (fn) {
            case Fn::exp: return std::exp(x);
            case Fn::log: return std::log(x);
            case Fn::sqrt: return std::sqrt(x);
            case Fn::sin: return std::sin(x);
            case Fn::cos: return std::cos(x);
            case Fn::tan: return std::tan(x);
            case Fn::sinh: return std::sinh(x);
            case Fn::cosh: return std::cosh(x);
            case Fn::tanh: return std::tanh(x);
            case Fn::abs: return std::fabs(x);
        }
        return std::nan("");
    }

    static double eval(const Node& n, double r, double theta) {
        return std::visit(
            [&](const auto& x) -> double {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Number>) {
                    return x.value;
                } else if constexpr (std::is_same_v<T, Variable>) {
                    return x.var == Var::r ? r : theta;
                } else if constexpr (std::is_same_v<T, Call>) {
                    return apply(x.fn, eval(*x.arg, r, theta));
                } else if constexpr (std::is_same_v<T, Negate>) {
                    return -eval(*x.arg, r, theta);
                } else {
                    const double a = eval(*x.lhs, r, theta);
                    const double b = eval(*x.rhs, r, theta);
                    switch (x.op) {
                        case Op::add: return a + b;
                        case Op::sub: return a - b;
                        case Op::mul: return a * b;
                        case Op::div: return a / b;
                        case Op::pow: return std::pow(a, b);
                    }
                    return std::nan("");
                }
            },
            n.v);
    }

    static bool mentions(const Node& n, Var var) {
        return std::visit(
            [&](const auto& x) -> bool {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Number>) return false;
                else if constexpr (std::is_same_v<T, Variable>) return x.var == var;
                else if constexpr (std::is_same_v<T, Call> || std::is_same_v<T, Negate>)
                    return mentions(*x.arg, var);
                else return mentions(*x.lhs, var) || mentions(*x.rhs, var);
            },
            n.v);
    }

    struct Parser {
        std::string_view s;
        std::size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        [[noreturn]] void fail(const std::string& what) const {
            throw ExpressionError(what + " at position " + std::to_string(pos) + " in \"" +
                                  std::string(s) + "\"");
        }
        static NodePtr make(auto node) { return std::make_shared<const Node>(Node{node}); }

        NodePtr parse_expr() {
            auto lhs = parse_term();
            for (;;) {
                if (eat('+')) lhs = make(Binary{Op::add, lhs, parse_term()});
                else if (eat('-')) lhs = make(Binary{Op::sub, lhs, parse_term()});
                else return lhs;
            }
        }
        NodePtr parse_term() {
            auto lhs = parse_unary();
            for (;;) {
                if (eat('*')) lhs = make(Binary{Op::mul, lhs, parse_unary()});
                else if (eat('/')) lhs = make(Binary{Op::div, lhs, parse_unary()});
                else return lhs;
            }
        }
        NodePtr parse_unary() {
            if (eat('-')) return make(Negate{parse_unary()});
            if (eat('+')) return parse_unary();
            return parse_power();
        }
        NodePtr parse_power() {
            auto base = parse_atom();
            if (eat('^')) return make(Binary{Op::pow, base, parse_unary()});
            return base;
        }
        NodePtr parse_atom() {
            skip_ws();
            if (pos >= s.size()) fail("unexpected end of expression");
            const char c = s[pos];
            if (c == '(') {
                ++pos;
                auto inner = parse_expr();
                if (!eat(')')) fail("expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const std::string rest(s.substr(pos));
                char* end = nullptr;
                const double v = std::strtod(rest.c_str(), &end);
                if (end == rest.c_str()) fail("bad number");
                pos += static_cast<std::size_t>(end - rest.c_str());
                return make(Number{v});
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos;
                while (pos < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                    ++pos;
                const std::string_view name = s.substr(start, pos - start);
                skip_ws();
                if (pos < s.size() && s[pos] == '(') {
                    ++pos;
                    const Fn fn = function_named(name);
                    auto arg = parse_expr();
                    if (!eat(')')) fail("expected ')'");
                    return make(Call{fn, arg});
                }
                if (name == "r") return make(Variable{Var::r});
                if (name == "theta" || name == "t") return make(Variable{Var::theta});
                if (name == "pi") return make(Number{std::numbers::pi});
                if (name == "e") return make(Number{std::numbers::e});
                pos = start;
                fail("unknown name '" + std::string(name) + "'");
            }
            fail(std::string("unexpected '") + c + "'");
        }
        Fn function_named(std::string_view name) {
            static constexpr std::pair<std::string_view, Fn> table[] = {
                {"exp", Fn::exp},   {"log", Fn::log},   {"sqrt", Fn::sqrt}, {"sin", Fn::sin},
                {"cos", Fn::cos},   {"tan", Fn::tan},   {"sinh", Fn::sinh}, {"cosh", Fn::cosh},
                {"tanh", Fn::tanh}, {"abs", Fn::abs}};
            for (const auto& [n, f] : table)
                if (n == name) return f;
            fail("unknown function '" + std::string(name) + "'");
        }
    };

    NodePtr root_;
    std::string source_;
};

// Evaluates a constant expression such as "exp(20)" or "2/3".
inline double evaluate_constant(std::string_view text) {
    const auto e = Expression::parse(text);
    if (e.depends_on_r() || e.depends_on_theta())
        throw ExpressionError("expected a constant, got \"" + std::string(text) + "\"");
    return e(0.0, 0.0);
}

}  // namespace warplab
