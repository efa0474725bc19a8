#include "singconv/expression.hpp"

#include "singconv/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>

namespace singconv {

std::string EvalContext::describe() const {
    std::string out;
    for (const auto& [n, v] : vars_) {
        if (!out.empty()) out += ", ";
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%s=%.17g", n.c_str(), v);
        out += buf;
    }
    return out.empty() ? "no bindings" : out;
}

namespace detail {

enum class Op { Add, Sub, Mul, Div, Pow, Neg };
enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };
enum class Fn { Exp, Abs, Sqrt, Sin, Cos, Log, Erf, Min, Max, PowFn, Ind };

struct ExprNode {
    enum class Kind { Number, Variable, Unary, Binary, Chain, Call } kind;
    double number = 0.0;
    std::string name;
    Op op = Op::Add;
    Fn fn = Fn::Exp;
    std::vector<Cmp> cmps;
    std::vector<std::shared_ptr<const ExprNode>> children;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

[[noreturn]] void eval_fail(const std::string& what, const EvalContext& ctx) {
    throw EvalError(what + " [" + ctx.describe() + "]");
}

double eval_node(const ExprNode& n, const EvalContext& ctx) {
    switch (n.kind) {
        case ExprNode::Kind::Number:
            return n.number;
        case ExprNode::Kind::Variable: {
            const double* v = ctx.find(n.name);
            if (v == nullptr) eval_fail("unknown variable '" + n.name + "'", ctx);
            return *v;
        }
        case ExprNode::Kind::Unary:
            return -eval_node(*n.children[0], ctx);
        case ExprNode::Kind::Binary: {
            double l = eval_node(*n.children[0], ctx);
            double r = eval_node(*n.children[1], ctx);
            switch (n.op) {
                case Op::Add: return l + r;
                case Op::Sub: return l - r;
                case Op::Mul: return l * r;
                case Op::Div:
                    if (r == 0.0) eval_fail("division by zero", ctx);
                    return l / r;
                case Op::Pow: {
                    double v = std::pow(l, r);
                    if (!std::isfinite(v)) eval_fail("power out of domain", ctx);
                    return v;
                }
                default: break;
            }
            eval_fail("bad operator", ctx);
        }
        case ExprNode::Kind::Chain: {
            double prev = eval_node(*n.children[0], ctx);
            for (std::size_t i = 0; i < n.cmps.size(); ++i) {
                double next = eval_node(*n.children[i + 1], ctx);
                bool ok = false;
                switch (n.cmps[i]) {
                    case Cmp::Lt: ok = prev < next; break;
                    case Cmp::Le: ok = prev <= next; break;
                    case Cmp::Gt: ok = prev > next; break;
                    case Cmp::Ge: ok = prev >= next; break;
                    case Cmp::Eq: ok = prev == next; break;
                    case Cmp::Ne: ok = prev != next; break;
                }
                if (!ok) return 0.0;
                prev = next;
            }
            return 1.0;
        }
        case ExprNode::Kind::Call: {
            double a = eval_node(*n.children[0], ctx);
            switch (n.fn) {
                case Fn::Exp: return std::exp(a);
                case Fn::Abs: return std::abs(a);
                case Fn::Sqrt:
                    if (a < 0.0) eval_fail("sqrt of negative value", ctx);
                    return std::sqrt(a);
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Log:
                    if (a <= 0.0) eval_fail("log of non-positive value", ctx);
                    return std::log(a);
                case Fn::Erf: return std::erf(a);
                case Fn::Ind: return a != 0.0 ? 1.0 : 0.0;
                case Fn::Min: return std::min(a, eval_node(*n.children[1], ctx));
                case Fn::Max: return std::max(a, eval_node(*n.children[1], ctx));
                case Fn::PowFn: {
                    double v = std::pow(a, eval_node(*n.children[1], ctx));
                    if (!std::isfinite(v)) eval_fail("power out of domain", ctx);
                    return v;
                }
            }
            eval_fail("bad function", ctx);
        }
    }
    eval_fail("bad node", ctx);
}

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos); }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr make_number(double v) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Number;
        n->number = v;
        return n;
    }

    NodePtr parse_expression() { return parse_comparison(); }

    NodePtr parse_comparison() {
        NodePtr first = parse_additive();
        std::vector<Cmp> cmps;
        std::vector<NodePtr> operands{first};
        while (true) {
            skip_ws();
            Cmp cmp;
            if (text.substr(pos, 2) == "<=") { cmp = Cmp::Le; pos += 2; }
            else if (text.substr(pos, 2) == ">=") { cmp = Cmp::Ge; pos += 2; }
            else if (text.substr(pos, 2) == "==") { cmp = Cmp::Eq; pos += 2; }
            else if (text.substr(pos, 2) == "!=") { cmp = Cmp::Ne; pos += 2; }
            else if (peek() == '<') { cmp = Cmp::Lt; ++pos; }
            else if (peek() == '>') { cmp = Cmp::Gt; ++pos; }
            else break;
            cmps.push_back(cmp);
            operands.push_back(parse_additive());
        }
        if (cmps.empty()) return first;
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Chain;
        n->cmps = std::move(cmps);
        n->children = std::move(operands);
        return n;
    }

    NodePtr parse_additive() {
        NodePtr left = parse_term();
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos;
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Binary;
            n->op = c == '+' ? Op::Add : Op::Sub;
            n->children = {left, parse_term()};
            left = n;
        }
        return left;
    }

    NodePtr parse_term() {
        NodePtr left = parse_unary();
        while (true) {
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos;
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Binary;
            n->op = c == '*' ? Op::Mul : Op::Div;
            n->children = {left, parse_unary()};
            left = n;
        }
        return left;
    }

    NodePtr parse_unary() {
        char c = peek();
        if (c == '-') {
            ++pos;
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Unary;
            n->children = {parse_unary()};
            return n;
        }
        if (c == '+') {
            ++pos;
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (peek() == '^') {
            ++pos;
            auto n = std::make_shared<ExprNode>();
            n->kind = ExprNode::Kind::Binary;
            n->op = Op::Pow;
            n->children = {base, parse_unary()}; // right-associative
            return n;
        }
        return base;
    }

    NodePtr parse_primary() {
        char c = peek();
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expression();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail("expected number, identifier or '('");
    }

    NodePtr parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos++;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                    ++pos;
            } else {
                pos = mark; // the 'e' belongs to an identifier-looking tail; stop
            }
        }
        try {
            return make_number(std::stod(std::string(text.substr(start, pos - start))));
        } catch (const std::exception&) {
            pos = start;
            fail("malformed number");
        }
    }

    NodePtr parse_identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        if (name == "pi") return make_number(M_PI);

        struct FnEntry {
            const char* name;
            Fn fn;
            int arity;
        };
        static const FnEntry fns[] = {
            {"exp", Fn::Exp, 1},  {"abs", Fn::Abs, 1},  {"sqrt", Fn::Sqrt, 1},
            {"sin", Fn::Sin, 1},  {"cos", Fn::Cos, 1},  {"log", Fn::Log, 1},
            {"erf", Fn::Erf, 1},  {"ind", Fn::Ind, 1},  {"min", Fn::Min, 2},
            {"max", Fn::Max, 2},  {"pow", Fn::PowFn, 2},
        };
        for (const FnEntry& e : fns) {
            if (name == e.name) {
                expect('(');
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprNode::Kind::Call;
                n->fn = e.fn;
                n->children.push_back(parse_expression());
                for (int k = 1; k < e.arity; ++k) {
                    expect(',');
                    n->children.push_back(parse_expression());
                }
                expect(')');
                return n;
            }
        }
        if (peek() == '(') fail("unknown function '" + name + "'");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Variable;
        n->name = std::move(name);
        return n;
    }
};

} // namespace

} // namespace detail

Expr Expr::parse(std::string_view text) {
    detail::Parser p{text};
    detail::NodePtr root = p.parse_expression();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    return Expr(std::move(root), std::string(text));
}

double Expr::eval(const EvalContext& ctx) const { return detail::eval_node(*root_, ctx); }

} // namespace singconv
