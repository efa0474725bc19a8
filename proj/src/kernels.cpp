#include "singconv/kernels.hpp"

#include "singconv/errors.hpp"

#include <cmath>
#include <memory>

namespace singconv {

void IndexSet::validate() const {
    if (!(lambda_min >= 0.0)) throw Error("index set: indices must be non-negative");
    if (!(lambda_min <= lambda_max)) throw Error("index set: lambda_min > lambda_max");
    if (!accumulation_is_infinite()) {
        if (!(accumulation >= 0.0)) throw Error("index set: negative accumulation point");
        if (accumulation < lambda_min || accumulation > lambda_max)
            throw Error("index set: accumulation point outside the closure of the index range");
    } else if (lambda_max != std::numeric_limits<double>::infinity()) {
        throw Error("index set: accumulation at infinity requires an unbounded index range");
    }
}

Rect KernelFamily::effective_support(double lambda, double eps_tail) const {
    if (auto hinted = support_hint(lambda)) return *hinted;
    if (effective_support_fn) return effective_support_fn(lambda, eps_tail);

    // Shell estimator: grow a centered square until the outermost shell mass
    // falls below eps_tail/2, taking the geometric tail beyond it as bounded
    // by the last shell.
    double radius = 1.0;
    QuadOptions opt;
    opt.tol = 1e-3;
    opt.abs_floor = 1e-14;
    auto abs_kernel = [this, lambda](double t, double s) {
        return std::abs(eval(lambda, t, s));
    };
    for (int i = 0; i < 24; ++i) {
        Rect inner{-radius, radius, -radius, radius};
        Rect outer{-2 * radius, 2 * radius, -2 * radius, 2 * radius};
        QuadResult shell = integrate_complement(abs_kernel, inner, outer, opt);
        if (std::abs(shell.value) < 0.5 * eps_tail) return outer;
        radius *= 2.0;
    }
    throw Error("kernel '" + name + "': could not locate an effective support at lambda=" +
                std::to_string(lambda));
}

namespace {

double gauss_eval(double lambda, double t, double s) {
    return (lambda / M_PI) * std::exp(-lambda * (t * t + s * s));
}

// Tail of the unit Gaussian outside [-r,r]^2 is below 2*exp(-lambda r^2).
double gauss_radius(double lambda, double eps) {
    return std::sqrt(std::log(4.0 / eps) / lambda);
}

} // namespace

KernelFamily box_kernel() {
    KernelFamily k;
    k.name = "box";
    k.index_set = IndexSet::from_one_to_infinity();
    k.eval = [](double lambda, double t, double s) {
        const double w = 1.0 / lambda;
        return (t >= 0.0 && t <= w && s >= 0.0 && s <= w) ? lambda * lambda : 0.0;
    };
    k.support_hint_fn = [](double lambda) -> std::optional<Rect> {
        const double w = 1.0 / lambda;
        return Rect{0.0, w, 0.0, w};
    };
    k.l1_bound_claim = 1.0;
    k.monotonicity_radii = std::pair{1.0, 1.0};
    k.symmetry = {false, false, true};
    return k;
}

KernelFamily gauss_weierstrass_kernel() {
    KernelFamily k;
    k.name = "gauss";
    k.index_set = IndexSet::from_one_to_infinity();
    k.eval = gauss_eval;
    k.effective_support_fn = [](double lambda, double eps) {
        const double r = gauss_radius(lambda, eps);
        return Rect{-r, r, -r, r};
    };
    k.l1_bound_claim = 1.0;
    k.monotonicity_radii = std::pair{1.0, 1.0};
    k.symmetry = {true, true, true};
    return k;
}

KernelFamily signed_asymmetric_kernel() {
    KernelFamily k;
    k.name = "signed_asym";
    k.index_set = IndexSet::from_one_to_infinity();
    k.eval = [](double lambda, double t, double s) {
        return 2.0 * gauss_eval(lambda, t, s) - gauss_eval(0.5 * lambda, t - 1.0 / lambda, s);
    };
    k.effective_support_fn = [](double lambda, double eps) {
        // Split the tail budget between the two Gaussian parts; the second
        // is centered at (1/lambda, 0) and twice as wide.
        const double r1 = gauss_radius(lambda, eps / 4.0);
        const double r2 = gauss_radius(0.5 * lambda, eps / 2.0);
        const double shift = 1.0 / lambda;
        const double r = std::max(r1, r2);
        return Rect{std::min(-r1, shift - r2), std::max(r1, shift + r2), -r, r};
    };
    k.l1_bound_claim = 3.0;
    k.monotonicity_radii = std::pair{1.0, 1.0};
    k.symmetry = {false, false, false};
    return k;
}

KernelFamily kernel_from_expression(const std::string& expr, const IndexSet& index_set,
                                    std::optional<ExpressionSupport> support,
                                    std::optional<double> l1_bound_claim,
                                    std::optional<std::pair<double, double>>
                                        monotonicity_radii) {
    index_set.validate();
    auto compiled = std::make_shared<Expr>(Expr::parse(expr));
    auto support_shared =
        support ? std::make_shared<ExpressionSupport>(std::move(*support)) : nullptr;

    auto support_rect = [support_shared](double lambda) -> std::optional<Rect> {
        if (!support_shared) return std::nullopt;
        EvalContext ctx;
        ctx.set("lambda", lambda);
        Rect r{support_shared->t_min.eval(ctx), support_shared->t_max.eval(ctx),
               support_shared->s_min.eval(ctx), support_shared->s_max.eval(ctx)};
        if (r.degenerate()) throw Error("expression kernel: degenerate support rectangle");
        return r;
    };

    KernelFamily k;
    k.name = "expr:" + expr;
    k.index_set = index_set;
    k.eval = [compiled, support_rect](double lambda, double t, double s) {
        if (auto r = support_rect(lambda); r && !r->contains(t, s)) return 0.0;
        EvalContext ctx;
        ctx.set("lambda", lambda).set("t", t).set("s", s);
        return compiled->eval(ctx);
    };
    k.support_hint_fn = support_rect;
    k.l1_bound_claim = l1_bound_claim;
    k.monotonicity_radii = monotonicity_radii;
    return k;
}

KernelFamily kernel_by_name(const std::string& name) {
    if (name == "box") return box_kernel();
    if (name == "gauss") return gauss_weierstrass_kernel();
    if (name == "signed_asym") return signed_asymmetric_kernel();
    throw ConfigError("unknown kernel '" + name + "' (catalog: box, gauss, signed_asym)");
}

} // namespace singconv
