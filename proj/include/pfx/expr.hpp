#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfx/domain.hpp"
#include "pfx/errors.hpp"

namespace pfx {

// Arithmetic expression language for problem-spec files.
//
// Grammar (precedence low to high; '^' is right-associative and binds
// tighter than unary minus, so -x^2 == -(x^2) while 2^-3 still parses):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | variable | function '(' expr ')' | '(' expr ')'
// Functions: sin cos exp ln abs sqrt.

enum class expr_kind { number, variable, unary, binary };

struct expr_node;
using expr = std::shared_ptr<const expr_node>;

struct expr_node {
    expr_kind kind;
    double value = 0.0;       // number
    std::size_t var = 0;      // variable slot
    std::string name;         // variable or function name
    char op = 0;              // binary operator, or '-' for negation
    expr lhs, rhs;            // children (unary uses lhs only)
};

inline expr make_number(double v) {
    return std::make_shared<expr_node>(expr_node{expr_kind::number, v, 0, "", 0, nullptr, nullptr});
}
inline expr make_variable(std::size_t slot, std::string name) {
    return std::make_shared<expr_node>(
        expr_node{expr_kind::variable, 0.0, slot, std::move(name), 0, nullptr, nullptr});
}
inline expr make_unary(std::string fn, expr child) {
    return std::make_shared<expr_node>(
        expr_node{expr_kind::unary, 0.0, 0, std::move(fn), 0, std::move(child), nullptr});
}
inline expr make_negate(expr child) { return make_unary("-", std::move(child)); }
inline expr make_binary(char op, expr a, expr b) {
    return std::make_shared<expr_node>(
        expr_node{expr_kind::binary, 0.0, 0, "", op, std::move(a), std::move(b)});
}

inline bool is_known_function(std::string_view id) {
    return id == "sin" || id == "cos" || id == "exp" || id == "ln" || id == "abs" ||
           id == "sqrt";
}

namespace detail {

struct expr_parser {
    std::string_view text;
    std::size_t pos = 0;
    std::span<const std::string> vars;

    [[noreturn]] void fail(const std::string& what) const {
        throw parse_error("expression parse error at column " + std::to_string(pos + 1) + ": " +
                          what);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    expr parse() {
        auto e = parse_expr();
        skip_ws();
        if (pos != text.size()) fail("unexpected trailing input");
        return e;
    }

    expr parse_expr() {
        auto e = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+'))
                e = make_binary('+', e, parse_term());
            else if (eat('-'))
                e = make_binary('-', e, parse_term());
            else
                return e;
        }
    }

    expr parse_term() {
        auto e = parse_factor();
        for (;;) {
            skip_ws();
            if (eat('*'))
                e = make_binary('*', e, parse_factor());
            else if (eat('/'))
                e = make_binary('/', e, parse_factor());
            else
                return e;
        }
    }

    expr parse_factor() {
        if (eat('-')) return make_negate(parse_factor());
        return parse_power();
    }

    expr parse_power() {
        auto base = parse_atom();
        if (eat('^')) return make_binary('^', base, parse_factor());
        return base;
    }

    expr parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            auto e = parse_expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    expr parse_number() {
        const char* begin = text.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += static_cast<std::size_t>(end - begin);
        return make_number(v);
    }

    expr parse_identifier() {
        const std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        const std::string id(text.substr(start, pos - start));
        if (is_known_function(id)) {
            if (!eat('(')) fail("function '" + id + "' needs parentheses");
            auto arg = parse_expr();
            if (!eat(')')) fail("missing ')' after argument of '" + id + "'");
            return make_unary(id, arg);
        }
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == id) return make_variable(i, id);
        throw unknown_variable("unknown variable '" + id + "' (allowed: " + [&] {
            std::string s;
            for (const auto& v : vars) s += (s.empty() ? "" : ", ") + v;
            return s.empty() ? std::string("none") : s;
        }() + ")");
    }
};

}  // namespace detail

/// Parse an expression over the given variable set.
inline expr parse_expr(std::string_view text, std::span<const std::string> vars) {
    detail::expr_parser p{text, 0, vars};
    return p.parse();
}

inline expr parse_expr(std::string_view text, std::initializer_list<std::string> vars) {
    const std::vector<std::string> v(vars);
    return parse_expr(text, std::span<const std::string>(v));
}

/// Evaluate with variable slot i bound to values[i].
inline double eval_expr(const expr& e, std::span<const double> values) {
    switch (e->kind) {
        case expr_kind::number:
            return e->value;
        case expr_kind::variable:
            if (e->var >= values.size())
                throw unknown_variable("no value bound for variable '" + e->name + "'");
            return values[e->var];
        case expr_kind::unary: {
            const double a = eval_expr(e->lhs, values);
            double r;
            if (e->name == "-") r = -a;
            else if (e->name == "sin") r = std::sin(a);
            else if (e->name == "cos") r = std::cos(a);
            else if (e->name == "exp") r = std::exp(a);
            else if (e->name == "abs") r = std::abs(a);
            else if (e->name == "ln") {
                if (!(a > 0.0))
                    throw eval_domain_error("ln of non-positive value " + repr_double(a));
                r = std::log(a);
            } else if (e->name == "sqrt") {
                if (a < 0.0)
                    throw eval_domain_error("sqrt of negative value " + repr_double(a));
                r = std::sqrt(a);
            } else {
                throw eval_domain_error("unknown function '" + e->name + "'");
            }
            if (!std::isfinite(r))
                throw eval_domain_error("non-finite result from " + e->name);
            return r;
        }
        case expr_kind::binary: {
            const double a = eval_expr(e->lhs, values);
            const double b = eval_expr(e->rhs, values);
            double r;
            switch (e->op) {
                case '+': r = a + b; break;
                case '-': r = a - b; break;
                case '*': r = a * b; break;
                case '/':
                    if (b == 0.0) throw eval_domain_error("division by zero");
                    r = a / b;
                    break;
                case '^': r = std::pow(a, b); break;
                default: throw eval_domain_error("unknown operator");
            }
            if (!std::isfinite(r))
                throw eval_domain_error(std::string("non-finite result from '") + e->op + "'");
            return r;
        }
    }
    throw eval_domain_error("corrupt expression node");
}

/// Fully parenthesized rendering; parse_expr(pretty_print(e)) is
/// structurally identical to e.
inline std::string pretty_print(const expr& e) {
    switch (e->kind) {
        case expr_kind::number:
            return repr_double(e->value);
        case expr_kind::variable:
            return e->name;
        case expr_kind::unary:
            if (e->name == "-") return "(-" + pretty_print(e->lhs) + ")";
            return e->name + "(" + pretty_print(e->lhs) + ")";
        case expr_kind::binary:
            return "(" + pretty_print(e->lhs) + " " + e->op + " " + pretty_print(e->rhs) + ")";
    }
    return "?";
}

inline bool structurally_equal(const expr& a, const expr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case expr_kind::number:
            return a->value == b->value;
        case expr_kind::variable:
            return a->var == b->var && a->name == b->name;
        case expr_kind::unary:
            return a->name == b->name && structurally_equal(a->lhs, b->lhs);
        case expr_kind::binary:
            return a->op == b->op && structurally_equal(a->lhs, b->lhs) &&
                   structurally_equal(a->rhs, b->rhs);
    }
    return false;
}

}  // namespace pfx
