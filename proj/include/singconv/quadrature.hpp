#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace singconv {

// Axis-aligned rectangle [a,b] x [c,d]. The edge flags record whether each
// side belongs to the set (order: left, right, bottom, top). Integrals never
// depend on them; point-membership queries do.
struct Rect {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    std::array<bool, 4> edges = {true, true, true, true};

    double width() const { return b - a; }
    double height() const { return d - c; }
    double area() const { return width() * height(); }
    bool degenerate() const { return b <= a || d <= c; }
    bool contains(double t, double s) const;
};

// Intersection, or nullopt when the overlap has zero area. Edge flags of the
// result are taken from whichever rectangle contributes each side.
std::optional<Rect> intersect(const Rect& r1, const Rect& r2);

// Smallest rectangle containing both.
Rect bounding_union(const Rect& r1, const Rect& r2);

// True when inner lies inside outer (closed-set comparison).
bool covers(const Rect& outer, const Rect& inner);

// The region outer \ inner decomposed into at most four rectangles (left and
// right full-height strips, then bottom and top bands). Degenerate pieces are
// dropped. Requires covers(outer, inner).
std::vector<Rect> complement_frames(const Rect& inner, const Rect& outer);

struct QuadOptions {
    double tol = 1e-8;          // relative target for the error estimate
    double abs_floor = 1e-13;   // absolute floor, stops refinement near 0
    int max_depth = 24;
    long max_cells = 500000;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    // False when refinement stopped at max_depth or max_cells before the
    // error target was met; value and error_estimate are still the best
    // achieved.
    bool converged = true;
};

using Integrand2D = std::function<double(double, double)>;
using Integrand1D = std::function<double(double)>;

// Adaptive tensor Gauss-Legendre integration of f over r. Each cell is
// evaluated with an 8x8 rule and a 4x4 rule; their difference is the cell
// error estimate. The cell with the largest estimate is split into four
// quadrants until the total estimate drops below max(tol*|value|,
// abs_floor). Fully deterministic: identical inputs produce identical
// values, estimates and evaluation counts at any thread count. Non-finite
// integrand values raise QuadratureError with the offending point.
QuadResult integrate_rect(const Integrand2D& f, const Rect& r, const QuadOptions& opt);
QuadResult integrate_rect(const Integrand2D& f, const Rect& r, double tol);

// Integral of f over effective_outer \ inner via complement_frames, each
// frame handled by integrate_rect. Requires covers(effective_outer, inner).
QuadResult integrate_complement(const Integrand2D& f, const Rect& inner,
                                const Rect& effective_outer, const QuadOptions& opt);
QuadResult integrate_complement(const Integrand2D& f, const Rect& inner,
                                const Rect& effective_outer, double tol);

// 1D counterpart (8- vs 4-point rule, interval bisection), used for the
// density integrals.
QuadResult integrate_interval(const Integrand1D& f, double a, double b,
                              const QuadOptions& opt);
QuadResult integrate_interval(const Integrand1D& f, double a, double b, double tol);

// Gauss-Legendre rule on [-1,1], nodes ordered ascending. Computed once per
// order by Newton iteration on the Legendre recurrence and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int order);

// Sum with a fixed pairwise reduction tree. The reduction order depends only
// on the element order, which keeps parallel pipelines bit-reproducible.
double pairwise_sum(std::span<const double> values);

} // namespace singconv
