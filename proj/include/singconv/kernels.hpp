#pragma once

#include "singconv/expression.hpp"
#include "singconv/quadrature.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace singconv {

// Index set of the kernel family: an interval of non-negative indices with
// its accumulation point (finite or +infinity).
struct IndexSet {
    double lambda_min = 1.0;
    double lambda_max = std::numeric_limits<double>::infinity();
    // +infinity means the family concentrates as lambda grows without bound.
    double accumulation = std::numeric_limits<double>::infinity();

    static IndexSet from_one_to_infinity() { return IndexSet{}; }
    void validate() const; // throws Error on a malformed set
    bool contains(double lambda) const {
        return lambda >= lambda_min && lambda <= lambda_max;
    }
    bool accumulation_is_infinite() const {
        return std::numeric_limits<double>::infinity() == accumulation;
    }
};

struct SymmetryFlags {
    bool even_t = false;
    bool even_s = false;
    bool nonnegative = false;
};

// A lambda-indexed kernel K_lambda(t,s). Immutable after construction;
// evaluate is pure, so values are safe to share across threads.
//
// support_hint, when set, is exact: evaluate returns 0 outside it. The
// effective support is a rectangle outside of which the |K| mass is below
// eps_tail; families without an analytic tail bound fall back to a shell
// estimator driven by quadrature.
struct KernelFamily {
    std::string name;
    IndexSet index_set;
    std::function<double(double lambda, double t, double s)> eval;
    std::function<std::optional<Rect>(double lambda)> support_hint_fn;
    std::function<Rect(double lambda, double eps_tail)> effective_support_fn;
    std::optional<double> l1_bound_claim;
    std::optional<std::pair<double, double>> monotonicity_radii;
    SymmetryFlags symmetry;

    double evaluate(double lambda, double t, double s) const { return eval(lambda, t, s); }
    std::optional<Rect> support_hint(double lambda) const {
        return support_hint_fn ? support_hint_fn(lambda) : std::nullopt;
    }
    Rect effective_support(double lambda, double eps_tail = 1e-10) const;
};

// Catalog families. Names ("box", "gauss", "signed_asym") are part of the
// CLI configuration contract.

// K_lambda = lambda^2 on [0,1/lambda]^2 (closed), 0 elsewhere. Unit mass.
KernelFamily box_kernel();

// W_lambda(t,s) = (lambda/pi) exp(-lambda (t^2+s^2)). Unit mass, unbounded
// support.
KernelFamily gauss_weierstrass_kernel();

// S_lambda = 2 W_-lambda - W_{lambda/2} shifted by (1/lambda, 0): signed and
// not even, total mass 1, |S| mass at most 3.
KernelFamily signed_asymmetric_kernel();

struct ExpressionSupport {
    Expr t_min, t_max, s_min, s_max; // expressions in lambda
};

// Kernel from an expression over {lambda, t, s}. When a support map is
// given it is treated as exact and the evaluation clamps to 0 outside it.
KernelFamily kernel_from_expression(const std::string& expr, const IndexSet& index_set,
                                    std::optional<ExpressionSupport> support = std::nullopt,
                                    std::optional<double> l1_bound_claim = std::nullopt,
                                    std::optional<std::pair<double, double>>
                                        monotonicity_radii = std::nullopt);

// Catalog lookup by name; throws ConfigError on unknown names.
KernelFamily kernel_by_name(const std::string& name);

} // namespace singconv
