#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace singconv {

// Variable bindings for expression evaluation; a handful of named scalars.
class EvalContext {
  public:
    EvalContext() = default;
    EvalContext& set(std::string name, double value) {
        for (auto& [n, v] : vars_) {
            if (n == name) {
                v = value;
                return *this;
            }
        }
        vars_.emplace_back(std::move(name), value);
        return *this;
    }
    const double* find(std::string_view name) const {
        for (const auto& [n, v] : vars_)
            if (n == name) return &v;
        return nullptr;
    }
    std::string describe() const;

  private:
    std::vector<std::pair<std::string, double>> vars_;
};

namespace detail {
struct ExprNode;
}

// Arithmetic over named scalars: + - * / ^ with unary minus, the functions
// exp, abs, sqrt, sin, cos, log, erf, min, max, pow, ind, the constant pi,
// and (optionally chained) comparisons evaluating to 1 or 0, so that
// "ind(0 <= t <= 1/lambda)" expresses piecewise supports. Total except for
// division and domain errors, which raise EvalError carrying the bindings.
class Expr {
  public:
    // Throws ParseError (with character position) on malformed input.
    static Expr parse(std::string_view text);

    double eval(const EvalContext& ctx) const;
    const std::string& text() const { return text_; }

  private:
    Expr(std::shared_ptr<const detail::ExprNode> root, std::string text)
        : root_(std::move(root)), text_(std::move(text)) {}
    std::shared_ptr<const detail::ExprNode> root_;
    std::string text_;
};

} // namespace singconv
