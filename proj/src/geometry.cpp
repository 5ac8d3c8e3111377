#include "dphase/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>

#include "dphase/parallel.hpp"
#include "dphase/rng.hpp"

namespace dphase {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() { return g_threads.load(); }
void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n); }

double norm(const Point& p, int dim) {
    return dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
}

double dist(const Point& a, const Point& b, int dim) {
    return dim == 1 ? std::abs(a[0] - b[0]) : std::hypot(a[0] - b[0], a[1] - b[1]);
}

Domain Domain::interval(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw parameter_error("interval needs finite a < b");
    Domain d;
    d.dim = 1;
    d.kind = DomainKind::Interval;
    d.lo = {a, 0.0};
    d.hi = {b, 0.0};
    return d;
}

Domain Domain::box(double ax, double bx, double ay, double by) {
    if (!(ax < bx) || !(ay < by))
        throw parameter_error("box needs nonempty per-axis bounds");
    Domain d;
    d.dim = 2;
    d.kind = DomainKind::Box;
    d.lo = {ax, ay};
    d.hi = {bx, by};
    return d;
}

Domain Domain::ball(Point center, double radius, int dim) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw parameter_error("ball needs radius > 0");
    Domain d;
    d.dim = dim;
    d.kind = DomainKind::Ball;
    d.center = center;
    d.radius = radius;
    d.lo = {center[0] - radius, center[1] - radius};
    d.hi = {center[0] + radius, center[1] + radius};
    return d;
}

bool Domain::contains(const Point& p) const {
    if (kind == DomainKind::Ball) return dist(p, center, dim) <= radius;
    for (int a = 0; a < dim; ++a)
        if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
}

bool Domain::contains_ball(const Ball& b) const {
    if (kind == DomainKind::Ball)
        return dist(b.center, center, dim) + b.radius <= radius;
    for (int a = 0; a < dim; ++a)
        if (b.center[a] - b.radius < lo[a] || b.center[a] + b.radius > hi[a]) return false;
    return true;
}

bool Domain::contains_compactly(const Domain& inner) const {
    if (inner.dim != dim) return false;
    Point ilo, ihi;
    inner.bounding_box(ilo, ihi);
    if (kind == DomainKind::Ball) {
        // all corners of the inner bounding box strictly inside
        if (dim == 1) return ilo[0] > center[0] - radius && ihi[0] < center[0] + radius;
        for (double x : {ilo[0], ihi[0]})
            for (double y : {ilo[1], ihi[1]})
                if (dist({x, y}, center, 2) >= radius) return false;
        return true;
    }
    for (int a = 0; a < dim; ++a)
        if (!(ilo[a] > lo[a] && ihi[a] < hi[a])) return false;
    return true;
}

bool Domain::intersects_ball(const Ball& b) const {
    if (kind == DomainKind::Ball) return dist(b.center, center, dim) < radius + b.radius;
    double d2 = 0.0;
    for (int a = 0; a < dim; ++a) {
        const double g = std::max({lo[a] - b.center[a], b.center[a] - hi[a], 0.0});
        d2 += g * g;
    }
    return std::sqrt(d2) < b.radius;
}

double Domain::measure() const {
    if (kind == DomainKind::Ball)
        return dim == 1 ? 2.0 * radius : M_PI * radius * radius;
    double m = 1.0;
    for (int a = 0; a < dim; ++a) m *= hi[a] - lo[a];
    return m;
}

double Domain::diameter() const {
    if (kind == DomainKind::Ball) return 2.0 * radius;
    if (dim == 1) return hi[0] - lo[0];
    return std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
}

double Domain::inradius() const {
    if (kind == DomainKind::Ball) return radius;
    double r = (hi[0] - lo[0]) / 2.0;
    if (dim == 2) r = std::min(r, (hi[1] - lo[1]) / 2.0);
    return r;
}

void Domain::bounding_box(Point& blo, Point& bhi) const {
    blo = lo;
    bhi = hi;
}

StarShape StarShape::make(const Domain& domain, Point center, double inner_radius) {
    if (!(inner_radius > 0.0)) throw parameter_error("star shape needs inner radius > 0");
    Ball b{center, inner_radius, domain.dim};
    if (!domain.contains_ball(b))
        throw containment_error("star ball not contained in the domain");
    return StarShape{domain, center, inner_radius};
}

double QuadratureRule::integrate(const std::function<double(const Point&)>& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
}

namespace {

double point_domain_distance(const Point& p, const Domain& d) {
    if (d.kind == DomainKind::Ball) return std::max(0.0, dist(p, d.center, d.dim) - d.radius);
    double s2 = 0.0;
    for (int a = 0; a < d.dim; ++a) {
        const double g = std::max({d.lo[a] - p[a], p[a] - d.hi[a], 0.0});
        s2 += g * g;
    }
    return std::sqrt(s2);
}

Point sample_center_contained(Rng& rng, const Domain& outer, double r) {
    if (outer.kind == DomainKind::Ball) {
        const double rmax = outer.radius - r;
        for (int tries = 0; tries < 10000; ++tries) {
            Point c = outer.center;
            for (int a = 0; a < outer.dim; ++a)
                c[a] = rng.uniform(outer.center[a] - rmax, outer.center[a] + rmax);
            if (dist(c, outer.center, outer.dim) <= rmax) return c;
        }
        return outer.center;
    }
    Point c{0.0, 0.0};
    for (int a = 0; a < outer.dim; ++a) {
        const double lo = outer.lo[a] + r, hi = outer.hi[a] - r;
        c[a] = lo >= hi ? 0.5 * (outer.lo[a] + outer.hi[a]) : rng.uniform(lo, hi);
    }
    return c;
}

Point sample_center_intersecting(Rng& rng, const Domain& inner, double r) {
    Point ilo, ihi;
    inner.bounding_box(ilo, ihi);
    for (int tries = 0; tries < 10000; ++tries) {
        Point c{0.0, 0.0};
        for (int a = 0; a < inner.dim; ++a) c[a] = rng.uniform(ilo[a] - r, ihi[a] + r);
        if (point_domain_distance(c, inner) < r) return c;
    }
    Point c = inner.kind == DomainKind::Ball
                  ? inner.center
                  : Point{0.5 * (ilo[0] + ihi[0]), 0.5 * (ilo[1] + ihi[1])};
    return c;
}

} // namespace

std::vector<Ball> sample_balls(const Domain& outer, const Domain& inner, int count,
                               BallSampleMode mode, std::uint64_t seed, double decades) {
    if (count < 1) throw parameter_error("sample_balls needs count >= 1");
    if (!(decades > 0.0)) throw parameter_error("sample_balls needs decades > 0");
    if (!outer.contains_compactly(inner))
        throw containment_error("inner region not compactly contained in outer");

    const double diam = outer.diameter();
    const double rmin = diam * std::pow(10.0, -decades);
    const double rmax = mode == BallSampleMode::ContainedInOuter ? outer.inradius() : diam;

    Rng rng(seed);
    std::vector<Ball> out;
    out.reserve(std::size_t(count));
    for (int i = 0; i < count; ++i) {
        const double r = rng.log_uniform(rmin, rmax);
        Ball b;
        b.dim = outer.dim;
        b.radius = r;
        b.center = mode == BallSampleMode::ContainedInOuter
                       ? sample_center_contained(rng, outer, r)
                       : sample_center_intersecting(rng, inner, r);
        out.push_back(b);
    }
    return out;
}

namespace {

using Panel = std::pair<double, double>;

// One-sided geometric grading on [s, s+len] (dir=+1) or [s-len, s] (dir=-1).
// Panel count doubles with level so the closest node approaches the singular
// point at a doubly-exponential rate.
void graded_side(double s, double len, int dir, int level, int max_panels,
                 std::vector<Panel>& panels) {
    if (len <= 0.0) return;
    const long long want = 4LL << std::min(level, 40);
    const int count = int(std::min<long long>(want, max_panels));
    double outer_d = len;
    for (int j = 0; j < count; ++j) {
        const double inner_d = (j == count - 1) ? 0.0 : outer_d * 0.5;
        const double a = s + dir * inner_d, b = s + dir * outer_d;
        panels.push_back({std::min(a, b), std::max(a, b)});
        outer_d = inner_d;
    }
}

std::vector<Panel> axis_panels(double lo, double hi, std::optional<double> sing, int level,
                               int max_panels) {
    std::vector<Panel> panels;
    if (!sing) {
        const long long want = 4LL << std::min(level, 20);
        const int count = int(std::min<long long>(want, 16384));
        const double h = (hi - lo) / count;
        for (int j = 0; j < count; ++j) panels.push_back({lo + j * h, lo + (j + 1) * h});
        return panels;
    }
    const double s = std::clamp(*sing, lo, hi);
    graded_side(s, s - lo, -1, level, max_panels, panels);
    graded_side(s, hi - s, +1, level, max_panels, panels);
    return panels;
}

void axis_rule(double lo, double hi, std::optional<double> sing, int level, int max_panels,
               std::vector<double>& nodes, std::vector<double>& weights) {
    for (const auto& [a, b] : axis_panels(lo, hi, sing, level, max_panels)) {
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        const double off = h / std::sqrt(3.0);
        nodes.push_back(m - off);
        nodes.push_back(m + off);
        weights.push_back(h);
        weights.push_back(h);
    }
}

} // namespace

std::vector<std::pair<double, double>> graded_panels_1d(double a, double b,
                                                        std::optional<double> singular_point,
                                                        int level) {
    if (level < 1) throw parameter_error("graded_panels needs level >= 1");
    if (!(a < b)) throw parameter_error("graded_panels needs a < b");
    return axis_panels(a, b, singular_point, level, 600);
}

QuadratureRule graded_quadrature_1d(double a, double b, std::optional<double> singular_point,
                                    int level) {
    if (level < 1) throw parameter_error("graded_quadrature needs level >= 1");
    if (!(a < b)) throw parameter_error("graded_quadrature needs a < b");
    std::vector<double> xs, ws;
    axis_rule(a, b, singular_point, level, 600, xs, ws);
    QuadratureRule rule;
    rule.level = level;
    rule.nodes.reserve(xs.size());
    rule.weights = std::move(ws);
    for (double x : xs) rule.nodes.push_back({x, 0.0});
    return rule;
}

QuadratureRule graded_quadrature(const Ball& ball, std::optional<Point> singular_point,
                                 int level) {
    if (level < 1) throw parameter_error("graded_quadrature needs level >= 1");
    if (singular_point) {
        Ball probe = ball;
        probe.radius = ball.radius * (1.0 + 1e-12) + 1e-300;
        if (dist(*singular_point, ball.center, ball.dim) > probe.radius)
            throw parameter_error("singular point must lie in the closed ball");
    }
    if (ball.dim == 1) {
        std::optional<double> s;
        if (singular_point) s = (*singular_point)[0];
        return graded_quadrature_1d(ball.center[0] - ball.radius,
                                    ball.center[0] + ball.radius, s, level);
    }
    // 2D: tensor rule on the circumscribed box; callers apply the ball
    // indicator to the integrand. Shallower panel cap keeps node counts sane.
    std::vector<double> xs[2], ws[2];
    for (int a = 0; a < 2; ++a) {
        std::optional<double> s;
        if (singular_point) s = (*singular_point)[a];
        axis_rule(ball.center[a] - ball.radius, ball.center[a] + ball.radius, s, level, 96,
                  xs[a], ws[a]);
    }
    QuadratureRule rule;
    rule.level = level;
    rule.nodes.reserve(xs[0].size() * xs[1].size());
    rule.weights.reserve(xs[0].size() * xs[1].size());
    for (std::size_t i = 0; i < xs[0].size(); ++i)
        for (std::size_t j = 0; j < xs[1].size(); ++j) {
            rule.nodes.push_back({xs[0][i], xs[1][j]});
            rule.weights.push_back(ws[0][i] * ws[1][j]);
        }
    return rule;
}

} // namespace dphase
