#include "singconv/quadrature.hpp"

#include "singconv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <queue>
#include <string>

namespace singconv {

bool Rect::contains(double t, double s) const {
    if (t < a || t > b || s < c || s > d) return false;
    if (t == a && !edges[0]) return false;
    if (t == b && !edges[1]) return false;
    if (s == c && !edges[2]) return false;
    if (s == d && !edges[3]) return false;
    return true;
}

std::optional<Rect> intersect(const Rect& r1, const Rect& r2) {
    Rect r;
    r.a = std::max(r1.a, r2.a);
    r.b = std::min(r1.b, r2.b);
    r.c = std::max(r1.c, r2.c);
    r.d = std::min(r1.d, r2.d);
    if (r.degenerate()) return std::nullopt;
    r.edges[0] = (r1.a > r2.a) ? r1.edges[0] : r2.edges[0];
    r.edges[1] = (r1.b < r2.b) ? r1.edges[1] : r2.edges[1];
    r.edges[2] = (r1.c > r2.c) ? r1.edges[2] : r2.edges[2];
    r.edges[3] = (r1.d < r2.d) ? r1.edges[3] : r2.edges[3];
    return r;
}

Rect bounding_union(const Rect& r1, const Rect& r2) {
    return Rect{std::min(r1.a, r2.a), std::max(r1.b, r2.b),
                std::min(r1.c, r2.c), std::max(r1.d, r2.d)};
}

bool covers(const Rect& outer, const Rect& inner) {
    return outer.a <= inner.a && inner.b <= outer.b &&
           outer.c <= inner.c && inner.d <= outer.d;
}

std::vector<Rect> complement_frames(const Rect& inner, const Rect& outer) {
    std::vector<Rect> frames;
    auto push = [&frames](double a, double b, double c, double d) {
        Rect r{a, b, c, d};
        if (!r.degenerate()) frames.push_back(r);
    };
    push(outer.a, inner.a, outer.c, outer.d); // left strip
    push(inner.b, outer.b, outer.c, outer.d); // right strip
    push(inner.a, inner.b, outer.c, inner.c); // bottom band
    push(inner.a, inner.b, inner.d, outer.d); // top band
    return frames;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rules

namespace {

GaussRule compute_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n(x).
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

} // namespace

const GaussRule& gauss_rule(int order) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_rule(order)).first;
    return it->second;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

// ---------------------------------------------------------------------------
// Adaptive engine

namespace {

constexpr int kHighOrder = 8;
constexpr int kLowOrder = 4;

struct CellEstimate {
    double value = 0.0;
    double error = 0.0;
};

double eval_checked(const Integrand2D& f, double t, double s) {
    double v = f(t, s);
    if (!std::isfinite(v)) {
        throw QuadratureError("integrand returned non-finite value at (t=" +
                                  std::to_string(t) + ", s=" + std::to_string(s) + ")",
                              t, s);
    }
    return v;
}

// One cell: tensor GL8 value with a tensor GL4 value as the error reference.
// 80 integrand evaluations.
CellEstimate evaluate_cell(const Integrand2D& f, const Rect& r) {
    const GaussRule& hi = gauss_rule(kHighOrder);
    const GaussRule& lo = gauss_rule(kLowOrder);
    const double cx = 0.5 * (r.a + r.b), hx = 0.5 * (r.b - r.a);
    const double cy = 0.5 * (r.c + r.d), hy = 0.5 * (r.d - r.c);

    double vhi = 0.0;
    for (int i = 0; i < kHighOrder; ++i) {
        const double t = cx + hx * hi.nodes[i];
        double row = 0.0;
        for (int j = 0; j < kHighOrder; ++j)
            row += hi.weights[j] * eval_checked(f, t, cy + hy * hi.nodes[j]);
        vhi += hi.weights[i] * row;
    }
    double vlo = 0.0;
    for (int i = 0; i < kLowOrder; ++i) {
        const double t = cx + hx * lo.nodes[i];
        double row = 0.0;
        for (int j = 0; j < kLowOrder; ++j)
            row += lo.weights[j] * eval_checked(f, t, cy + hy * lo.nodes[j]);
        vlo += lo.weights[i] * row;
    }
    const double scale = hx * hy;
    return CellEstimate{vhi * scale, std::abs(vhi - vlo) * scale};
}

struct Cell {
    Rect rect;
    CellEstimate est;
    int depth = 0;
    std::uint64_t id = 0;
};

struct WorseError {
    // Max-heap on error; ties broken toward the older cell so the expansion
    // sequence is fully determined.
    bool operator()(const Cell& x, const Cell& y) const {
        if (x.est.error != y.est.error) return x.est.error < y.est.error;
        return x.id > y.id;
    }
};

QuadResult reduce_leaves(std::vector<Cell> leaves, long evaluations, bool converged) {
    std::sort(leaves.begin(), leaves.end(),
              [](const Cell& x, const Cell& y) { return x.id < y.id; });
    std::vector<double> values, errors;
    values.reserve(leaves.size());
    errors.reserve(leaves.size());
    for (const Cell& c : leaves) {
        values.push_back(c.est.value);
        errors.push_back(c.est.error);
    }
    QuadResult res;
    res.value = pairwise_sum(values);
    res.error_estimate = pairwise_sum(errors);
    res.evaluations = evaluations;
    res.converged = converged;
    return res;
}

} // namespace

QuadResult integrate_rect(const Integrand2D& f, const Rect& r, const QuadOptions& opt) {
    if (r.degenerate()) return QuadResult{0.0, 0.0, 0, true};

    std::priority_queue<Cell, std::vector<Cell>, WorseError> active;
    std::vector<Cell> frozen; // cells at max depth, no longer refined
    std::uint64_t next_id = 0;
    long evaluations = 0;
    long cells = 1;

    Cell root{r, evaluate_cell(f, r), 0, next_id++};
    evaluations += 80;
    double total_value = root.est.value;
    double total_error = root.est.error;
    active.push(root);

    bool converged = true;
    while (true) {
        const double target = std::max(opt.tol * std::abs(total_value), opt.abs_floor);
        if (total_error <= target) break;
        if (active.empty() || cells + 4 > opt.max_cells) {
            converged = false;
            break;
        }
        Cell worst = active.top();
        active.pop();
        if (worst.depth >= opt.max_depth) {
            // Everything still active is at least this bad and at max depth.
            frozen.push_back(worst);
            converged = false;
            while (!active.empty()) {
                frozen.push_back(active.top());
                active.pop();
            }
            break;
        }
        total_value -= worst.est.value;
        total_error -= worst.est.error;
        const double mx = 0.5 * (worst.rect.a + worst.rect.b);
        const double my = 0.5 * (worst.rect.c + worst.rect.d);
        const Rect quads[4] = {
            {worst.rect.a, mx, worst.rect.c, my},
            {mx, worst.rect.b, worst.rect.c, my},
            {worst.rect.a, mx, my, worst.rect.d},
            {mx, worst.rect.b, my, worst.rect.d},
        };
        for (const Rect& q : quads) {
            Cell child{q, evaluate_cell(f, q), worst.depth + 1, next_id++};
            evaluations += 80;
            total_value += child.est.value;
            total_error += child.est.error;
            active.push(child);
        }
        cells += 4;
    }

    std::vector<Cell> leaves = std::move(frozen);
    while (!active.empty()) {
        leaves.push_back(active.top());
        active.pop();
    }
    return reduce_leaves(std::move(leaves), evaluations, converged);
}

QuadResult integrate_rect(const Integrand2D& f, const Rect& r, double tol) {
    QuadOptions opt;
    opt.tol = tol;
    return integrate_rect(f, r, opt);
}

QuadResult integrate_complement(const Integrand2D& f, const Rect& inner,
                                const Rect& effective_outer, const QuadOptions& opt) {
    if (!covers(effective_outer, inner))
        throw Error("integrate_complement: inner rectangle not contained in outer");
    std::vector<Rect> frames = complement_frames(inner, effective_outer);
    std::vector<double> values, errors;
    QuadResult total;
    for (const Rect& frame : frames) {
        QuadResult part = integrate_rect(f, frame, opt);
        values.push_back(part.value);
        errors.push_back(part.error_estimate);
        total.evaluations += part.evaluations;
        total.converged = total.converged && part.converged;
    }
    total.value = pairwise_sum(values);
    total.error_estimate = pairwise_sum(errors);
    return total;
}

QuadResult integrate_complement(const Integrand2D& f, const Rect& inner,
                                const Rect& effective_outer, double tol) {
    QuadOptions opt;
    opt.tol = tol;
    return integrate_complement(f, inner, effective_outer, opt);
}

// ---------------------------------------------------------------------------
// 1D rule, same structure with interval bisection

namespace {

struct Segment {
    double a, b;
    double value, error;
    int depth;
    std::uint64_t id;
};

struct WorseError1D {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.id > y.id;
    }
};

Segment evaluate_segment(const Integrand1D& f, double a, double b, int depth,
                         std::uint64_t id) {
    const GaussRule& hi = gauss_rule(kHighOrder);
    const GaussRule& lo = gauss_rule(kLowOrder);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    auto checked = [&](double x) {
        double v = f(x);
        if (!std::isfinite(v))
            throw QuadratureError("integrand returned non-finite value at x=" +
                                      std::to_string(x),
                                  x, 0.0);
        return v;
    };
    double vhi = 0.0;
    for (int i = 0; i < kHighOrder; ++i) vhi += hi.weights[i] * checked(c + h * hi.nodes[i]);
    double vlo = 0.0;
    for (int i = 0; i < kLowOrder; ++i) vlo += lo.weights[i] * checked(c + h * lo.nodes[i]);
    return Segment{a, b, vhi * h, std::abs(vhi - vlo) * h, depth, id};
}

} // namespace

QuadResult integrate_interval(const Integrand1D& f, double a, double b,
                              const QuadOptions& opt) {
    if (b <= a) return QuadResult{0.0, 0.0, 0, true};
    std::priority_queue<Segment, std::vector<Segment>, WorseError1D> active;
    std::vector<Segment> frozen;
    std::uint64_t next_id = 0;
    long evaluations = 12;
    long cells = 1;
    Segment root = evaluate_segment(f, a, b, 0, next_id++);
    double total_value = root.value;
    double total_error = root.error;
    active.push(root);
    bool converged = true;
    while (true) {
        const double target = std::max(opt.tol * std::abs(total_value), opt.abs_floor);
        if (total_error <= target) break;
        if (active.empty() || cells + 2 > opt.max_cells) {
            converged = false;
            break;
        }
        Segment worst = active.top();
        active.pop();
        if (worst.depth >= opt.max_depth) {
            frozen.push_back(worst);
            converged = false;
            while (!active.empty()) {
                frozen.push_back(active.top());
                active.pop();
            }
            break;
        }
        total_value -= worst.value;
        total_error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto& [lo_x, hi_x] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            Segment child = evaluate_segment(f, lo_x, hi_x, worst.depth + 1, next_id++);
            evaluations += 12;
            total_value += child.value;
            total_error += child.error;
            active.push(child);
        }
        cells += 2;
    }
    std::vector<Segment> leaves = std::move(frozen);
    while (!active.empty()) {
        leaves.push_back(active.top());
        active.pop();
    }
    std::sort(leaves.begin(), leaves.end(),
              [](const Segment& x, const Segment& y) { return x.id < y.id; });
    std::vector<double> values, errors;
    for (const Segment& seg : leaves) {
        values.push_back(seg.value);
        errors.push_back(seg.error);
    }
    QuadResult res;
    res.value = pairwise_sum(values);
    res.error_estimate = pairwise_sum(errors);
    res.evaluations = evaluations;
    res.converged = converged;
    return res;
}

QuadResult integrate_interval(const Integrand1D& f, double a, double b, double tol) {
    QuadOptions opt;
    opt.tol = tol;
    return integrate_interval(f, a, b, opt);
}

} // namespace singconv
