#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dphase/errors.hpp"

namespace dphase {

// Points live in R^1 or R^2; in 1D only the first coordinate is used.
using Point = std::array<double, 2>;

double norm(const Point& p, int dim);
double dist(const Point& a, const Point& b, int dim);

enum class DomainKind { Interval, Box, Ball };

struct Ball {
    Point center{0.0, 0.0};
    double radius = 0.0;
    int dim = 1;
};

// Bounded domain with nonempty interior: an interval, an axis-aligned box,
// or a ball.
struct Domain {
    int dim = 1;
    DomainKind kind = DomainKind::Interval;
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};
    Point center{0.0, 0.0};
    double radius = 0.0;

    static Domain interval(double a, double b);
    static Domain box(double ax, double bx, double ay, double by);
    static Domain ball(Point center, double radius, int dim);

    bool contains(const Point& p) const;
    bool contains_ball(const Ball& b) const;           // exact comparisons
    bool contains_compactly(const Domain& inner) const; // strict margin > 0
    bool intersects_ball(const Ball& b) const;

    double measure() const;
    double diameter() const;
    double inradius() const;
    // Smallest axis-aligned box containing the domain.
    void bounding_box(Point& blo, Point& bhi) const;
};

// A domain star-shaped with respect to the ball B(center, inner_radius).
// The supported domain kinds are convex, so the star property reduces to
// ball containment.
struct StarShape {
    Domain domain;
    Point center{0.0, 0.0};
    double inner_radius = 0.0;

    static StarShape make(const Domain& domain, Point center, double inner_radius);
};

struct QuadratureRule {
    std::vector<Point> nodes;
    std::vector<double> weights;
    int level = 0;

    double integrate(const std::function<double(const Point&)>& f) const;
};

enum class BallSampleMode { ContainedInOuter, IntersectingInner };

// Seeded ball sampler. Radii are log-uniform across `decades` decades below
// the outer diameter (contained mode clips at the outer inradius so every
// ball fits). Deterministic for a fixed seed.
std::vector<Ball> sample_balls(const Domain& outer, const Domain& inner, int count,
                               BallSampleMode mode, std::uint64_t seed,
                               double decades = 5.0);

// Composite Gauss-2 rule over the ball (1D: the interval itself; 2D: the
// circumscribed box, callers apply the ball indicator). With a singular
// point the panels are geometrically graded toward it, and the grading depth
// grows exponentially with level so near-critical negative powers reveal
// their divergence within a few levels.
QuadratureRule graded_quadrature(const Ball& ball, std::optional<Point> singular_point,
                                 int level);

// Same rule over an explicit interval [a, b] (1D helper).
QuadratureRule graded_quadrature_1d(double a, double b, std::optional<double> singular_point,
                                    int level);

// The panel decomposition behind the 1D rule, for callers that refine panels
// adaptively (near-singular integrands punish fixed nodes).
std::vector<std::pair<double, double>> graded_panels_1d(double a, double b,
                                                        std::optional<double> singular_point,
                                                        int level);

} // namespace dphase
