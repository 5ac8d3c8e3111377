#include "dphase/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dphase/rng.hpp"

namespace dphase {

namespace {
constexpr double kClampFloor = 1e-300;
constexpr double kOverflowCap = 1e280;
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "bounded";
        case Verdict::Diverging: return "diverging";
        default: return "inconclusive";
    }
}

FieldOracle weight_oracle(const Weight& w) {
    return {w.dim, [w](const Point& x) { return w.value(x); }};
}

FieldOracle sigma_oracle(const Weight& w) {
    return {w.dim, [w](const Point& x) { return sigma_at(w, x); }};
}

FieldOracle omega_oracle(const Weight& w) {
    return {w.dim, [w](const Point& x) { return omega_at(w, x); }};
}

Verdict verdict_from(const std::vector<double>& estimates, const VerdictThresholds& th) {
    if (estimates.empty()) return Verdict::Inconclusive;
    const double last = estimates.back();
    if (!std::isfinite(last)) return Verdict::Diverging;
    if (estimates.size() < 2) return Verdict::Inconclusive;
    const double prev = estimates[estimates.size() - 2];
    if (prev == 0.0) return last == 0.0 ? Verdict::Bounded : Verdict::Inconclusive;
    if (last >= th.growth * prev) return Verdict::Diverging;
    if (last <= (1.0 + th.stabilization) * prev) return Verdict::Bounded;
    return Verdict::Inconclusive;
}

namespace {

// ---- minima scanning ------------------------------------------------------

struct Anchor {
    Point x{0.0, 0.0};
    double value = 0.0;
};

// Golden-section descent inside a bracket; the scan is only 8k points, so
// anchors sitting at exact zeros of f (where quotients blow up) need the
// extra digits.
Anchor refine_1d(const std::function<double(const Point&)>& f, double a, double b) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f({x1, 0.0}), f2 = f({x2, 0.0});
    for (int it = 0; it < 120 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f({x1, 0.0});
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f({x2, 0.0});
        }
    }
    const double xm = 0.5 * (a + b);
    return {{xm, 0.0}, f({xm, 0.0})};
}

std::vector<Anchor> find_minima(const FieldOracle& f, const Domain& region, int max_anchors) {
    Point lo, hi;
    region.bounding_box(lo, hi);
    std::vector<Anchor> anchors;
    if (f.dim == 1) {
        const int n = 8193;
        std::vector<double> vals(n);
        const double h = (hi[0] - lo[0]) / (n - 1);
        for (int i = 0; i < n; ++i) vals[std::size_t(i)] = f.f({lo[0] + h * i, 0.0});
        for (int i = 1; i + 1 < n; ++i) {
            if (vals[std::size_t(i)] <= vals[std::size_t(i - 1)] &&
                vals[std::size_t(i)] < vals[std::size_t(i + 1)]) {
                anchors.push_back(
                    refine_1d(f.f, lo[0] + h * (i - 1), lo[0] + h * (i + 1)));
            }
        }
        // global scan minimum as a fallback anchor
        const auto mi = std::min_element(vals.begin(), vals.end()) - vals.begin();
        anchors.push_back({{lo[0] + h * double(mi), 0.0}, vals[std::size_t(mi)]});
    } else {
        const int n = 129;
        std::vector<double> vals(std::size_t(n) * n);
        auto at = [&](int i, int j) { return vals[std::size_t(j) * n + std::size_t(i)]; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                vals[std::size_t(j) * n + std::size_t(i)] =
                    f.f({lo[0] + (hi[0] - lo[0]) * i / (n - 1),
                         lo[1] + (hi[1] - lo[1]) * j / (n - 1)});
        for (int j = 1; j + 1 < n; ++j)
            for (int i = 1; i + 1 < n; ++i) {
                const double v = at(i, j);
                if (v <= at(i - 1, j) && v < at(i + 1, j) && v <= at(i, j - 1) &&
                    v < at(i, j + 1))
                    anchors.push_back({{lo[0] + (hi[0] - lo[0]) * i / (n - 1),
                                        lo[1] + (hi[1] - lo[1]) * j / (n - 1)},
                                       v});
            }
    }
    std::sort(anchors.begin(), anchors.end(),
              [](const Anchor& a, const Anchor& b) { return a.value < b.value; });
    if (int(anchors.size()) > max_anchors) anchors.resize(std::size_t(max_anchors));
    return anchors;
}

// ---- Z estimator ----------------------------------------------------------

struct RunningSup {
    double value = 0.0;
    Witness witness;

    void offer_pair(double ratio, const Point& x, const Point& y) {
        if (ratio > value || (!std::isfinite(ratio) && std::isfinite(value))) {
            value = ratio;
            witness.is_ball = false;
            witness.x = x;
            witness.y = y;
            witness.value = ratio;
        }
    }
    void offer_ball(double ratio, const Ball& b) {
        if (ratio > value || (!std::isfinite(ratio) && std::isfinite(value))) {
            value = ratio;
            witness.is_ball = true;
            witness.ball = b;
            witness.value = ratio;
        }
    }
};

} // namespace

ConditionReport z_constant(const FieldOracle& f, double kappa, const Domain& omega,
                           int levels, std::uint64_t seed, VerdictThresholds th) {
    if (!(kappa > 0.0)) throw parameter_error("z_constant needs kappa > 0");
    if (levels < 1) throw parameter_error("z_constant needs levels >= 1");

    Point lo, hi;
    omega.bounding_box(lo, hi);
    const double diam = omega.diameter();
    const auto anchors = find_minima(f, omega, f.dim == 1 ? 16 : 8);

    std::vector<Point> dirs;
    if (f.dim == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (int i = 0; i < 8; ++i) {
            const double t = 2.0 * M_PI * i / 8.0;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
    }

    RunningSup sup;
    Rng rng(seed);
    auto consider = [&](const Point& x, const Point& y) {
        if (!omega.contains(x) || !omega.contains(y)) return;
        const double d = dist(x, y, f.dim);
        if (d <= 0.0) return;
        const double dk = std::pow(d, kappa);
        if (dk < 1e-290) return; // underflow guard
        const double den = f.f(y) + dk;
        const double num = f.f(x);
        if (den <= 0.0) {
            if (num > 0.0) sup.offer_pair(kInf, x, y);
            return;
        }
        sup.offer_pair(num / den, x, y);
    };

    ConditionReport rep;
    rep.condition = Condition::Z;
    rep.parameter = kappa;
    rep.inner = omega;
    rep.outer = omega;

    for (int L = 1; L <= levels; ++L) {
        long budget = std::lround(std::pow(10.0, 2 + L));
        const int depth = int(std::min<long long>(4LL << L, 512));
        for (const auto& anchor : anchors) {
            for (const auto& dir : dirs) {
                for (int j = 1; j <= depth && budget > 0; ++j) {
                    const double s = diam * std::pow(2.0, -j);
                    Point x = anchor.x, ymid = anchor.x;
                    for (int a = 0; a < f.dim; ++a) {
                        x[a] += s * dir[a];
                        ymid[a] += 0.5 * s * dir[a];
                    }
                    consider(x, anchor.x);
                    consider(x, ymid);
                    budget -= 2;
                }
            }
        }
        while (budget-- > 0) {
            Point x{0.0, 0.0}, y{0.0, 0.0};
            for (int a = 0; a < f.dim; ++a) {
                x[a] = rng.uniform(lo[a], hi[a]);
                y[a] = rng.uniform(lo[a], hi[a]);
            }
            consider(x, y);
        }
        rep.estimates.push_back({L, sup.value});
    }

    std::vector<double> est;
    for (auto& [lvl, e] : rep.estimates) est.push_back(e);
    rep.verdict = verdict_from(est, th);
    rep.witness = sup.witness;
    return rep;
}

// ---- Muckenhoupt estimator --------------------------------------------------

namespace {

struct ClipInterval {
    double lo = 0.0, hi = 0.0;
    bool empty() const { return !(lo < hi); }
};

// Integration region of a ball, optionally clipped to a region (global
// variant). 1D clips exactly; 2D keeps the box rule and applies indicators.
ClipInterval clip_1d(const Ball& b, const Domain* clip) {
    ClipInterval c{b.center[0] - b.radius, b.center[0] + b.radius};
    if (clip) {
        Point lo, hi;
        clip->bounding_box(lo, hi);
        c.lo = std::max(c.lo, lo[0]);
        c.hi = std::min(c.hi, hi[0]);
    }
    return c;
}

Point ball_argmin(const FieldOracle& f, const Ball& b, const Domain* clip) {
    Point best = b.center;
    double best_val = kInf;
    if (f.dim == 1) {
        const ClipInterval c = clip_1d(b, clip);
        if (c.empty()) return best;
        int best_i = 0;
        for (int i = 0; i < 513; ++i) {
            const Point z{c.lo + (c.hi - c.lo) * i / 512.0, 0.0};
            const double v = f.f(z);
            if (v < best_val) {
                best_val = v;
                best = z;
                best_i = i;
            }
        }
        // golden-section refinement: the grading anchor must coincide with
        // the zero of f to machine precision, otherwise deep panels straddle
        // it and the negative power overshoots
        double lo = c.lo + (c.hi - c.lo) * std::max(0, best_i - 1) / 512.0;
        double hi = c.lo + (c.hi - c.lo) * std::min(512, best_i + 1) / 512.0;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = f.f({x1, 0.0}), f2 = f.f({x2, 0.0});
        for (int it = 0; it < 120 && hi - lo > 1e-17 * std::max(1.0, std::abs(hi)); ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = f.f({x1, 0.0});
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = f.f({x2, 0.0});
            }
        }
        const Point mid{0.5 * (lo + hi), 0.0};
        if (f.f(mid) <= best_val) best = mid;
        return best;
    }
    // deterministic sunflower pattern inside the ball
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < 513; ++i) {
        const double rr = b.radius * std::sqrt((i + 0.5) / 513.0);
        const double t = golden * i;
        const Point z{b.center[0] + rr * std::cos(t), b.center[1] + rr * std::sin(t)};
        if (clip && !clip->contains(z)) continue;
        const double v = f.f(z);
        if (v < best_val) {
            best_val = v;
            best = z;
        }
    }
    return best;
}

// Adaptive panel integration of f and f^expo over [a, b]: panels where the
// Gauss-2 and midpoint values of the negative power disagree get bisected.
// Fixed nodes overshoot badly when they land next to a zero of f that is not
// the grading anchor (oscillating weights have many).
struct PanelIntegrator {
    const std::function<double(const Point&)>& f;
    double expo;
    int max_depth;
    long budget; // bisection budget per ball
    double sum_f = 0.0;
    double sum_g = 0.0;
    bool overflow = false;

    double gval(double x) const {
        return std::pow(std::max(f({x, 0.0}), kClampFloor), expo);
    }

    void panel(double a, double b, int depth) {
        if (overflow) return;
        const double h = 0.5 * (b - a), m = 0.5 * (a + b);
        const double off = h / std::sqrt(3.0);
        const double f1 = f({m - off, 0.0}), f2 = f({m + off, 0.0});
        const double g1 = std::pow(std::max(f1, kClampFloor), expo);
        const double g2 = std::pow(std::max(f2, kClampFloor), expo);
        const double gauss = h * (g1 + g2);
        const double mid = 2.0 * h * gval(m);
        const double scale = std::max({gauss, mid, 1e-300});
        if (depth > 0 && budget > 0 && std::abs(gauss - mid) > 0.25 * scale) {
            --budget;
            panel(a, m, depth - 1);
            panel(m, b, depth - 1);
            return;
        }
        sum_f += h * (f1 + f2);
        sum_g += gauss;
        if (sum_g > kOverflowCap || !std::isfinite(sum_g)) overflow = true;
    }
};

// (avg_B f) * (avg_B f^(-1/(r-1)))^(r-1) with overflow -> +inf semantics.
double ball_quotient(const FieldOracle& f, const Ball& b, const Domain* clip, double r,
                     int quad_level) {
    const double expo = -1.0 / (r - 1.0);
    double sum_f = 0.0, sum_g = 0.0, vol = 0.0;
    if (f.dim == 1) {
        const ClipInterval c = clip_1d(b, clip);
        if (c.empty()) return 0.0;
        const Point anchor = ball_argmin(f, b, clip);
        // Depth and budget stay level-independent: the level only deepens
        // the graded skeleton, so bounded integrals give the same converged
        // value at every level while non-integrable ones keep growing.
        PanelIntegrator integ{f.f, expo, 30, 50000};
        for (const auto& [pa, pb] : graded_panels_1d(c.lo, c.hi, anchor[0], quad_level)) {
            integ.panel(pa, pb, integ.max_depth);
            if (integ.overflow) break;
        }
        if (integ.overflow) return integ.sum_f > 0.0 ? kInf : 0.0;
        sum_f = integ.sum_f;
        sum_g = integ.sum_g;
        vol = c.hi - c.lo;
    } else {
        const Point anchor = ball_argmin(f, b, clip);
        const QuadratureRule rule = graded_quadrature(b, anchor, quad_level);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Point& z = rule.nodes[i];
            if (dist(z, b.center, 2) > b.radius) continue;
            if (clip && !clip->contains(z)) continue;
            const double v = f.f(z);
            sum_f += rule.weights[i] * v;
            sum_g += rule.weights[i] * std::pow(std::max(v, kClampFloor), expo);
            vol += rule.weights[i];
            if (sum_g > kOverflowCap) return sum_f > 0.0 ? kInf : 0.0;
        }
    }
    if (vol <= 0.0) return 0.0;
    const double avg_f = sum_f / vol;
    const double powed = std::pow(sum_g / vol, r - 1.0);
    if (!std::isfinite(powed) || powed > kOverflowCap) return avg_f > 0.0 ? kInf : 0.0;
    return avg_f * powed;
}

ConditionReport muck_impl(const FieldOracle& f, double r, const Domain& omega,
                          const Domain& outer_U, bool global, int levels,
                          std::uint64_t seed, VerdictThresholds th) {
    if (!(r > 1.0)) throw parameter_error("Muckenhoupt estimator needs r > 1");
    if (levels < 1) throw parameter_error("Muckenhoupt estimator needs levels >= 1");
    if (!global && !outer_U.contains_compactly(omega))
        throw containment_error("inner region not compactly contained in outer");

    ConditionReport rep;
    rep.condition = global ? Condition::AGlobal : Condition::A;
    rep.parameter = r;
    rep.inner = omega;
    rep.outer = outer_U;

    // Anchored balls: dyadic radii at the refined minima of f over omega,
    // swept across center offsets. The near-sup configurations must already
    // sit in this level-independent family, otherwise late random draws keep
    // raising the running max and stabilization never triggers.
    const auto anchors = find_minima(f, omega, 3);
    std::vector<Ball> anchored;
    const double offsets[] = {0.0, 0.25, -0.25, 0.5, -0.5, 0.7, -0.7, 0.85, -0.85, 0.95, -0.95};
    for (const auto& anchor : anchors) {
        double rmax;
        if (global) {
            rmax = omega.diameter();
        } else {
            Point ulo, uhi;
            outer_U.bounding_box(ulo, uhi);
            rmax = kInf;
            for (int a = 0; a < f.dim; ++a)
                rmax = std::min({rmax, anchor.x[a] - ulo[a], uhi[a] - anchor.x[a]});
            if (outer_U.kind == DomainKind::Ball)
                rmax = outer_U.radius - dist(anchor.x, outer_U.center, f.dim);
            if (!(rmax > 0.0)) continue;
        }
        for (int j = 0; j < 16; ++j) {
            const double rad = 0.5 * rmax * std::pow(2.0, -j);
            for (double beta : offsets) {
                Point c = anchor.x;
                c[0] += beta * rad;
                anchored.push_back({c, rad, f.dim});
            }
        }
    }

    // seeded random family, nested across levels
    const int max_count = 100 << (levels - 1);
    std::vector<Ball> random_balls;
    if (global) {
        Point lo, hi;
        omega.bounding_box(lo, hi);
        const double pad = omega.diameter();
        Domain sample_outer =
            f.dim == 1 ? Domain::interval(lo[0] - pad, hi[0] + pad)
                       : Domain::box(lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad);
        random_balls = sample_balls(sample_outer, omega, max_count,
                                    BallSampleMode::IntersectingInner, seed);
    } else {
        random_balls =
            sample_balls(outer_U, omega, max_count, BallSampleMode::ContainedInOuter, seed);
    }

    auto admissible = [&](const Ball& b) {
        if (global) return omega.intersects_ball(b);
        return outer_U.contains_ball(b);
    };

    RunningSup sup;
    const Domain* clip = global ? &omega : nullptr;
    for (int L = 1; L <= levels; ++L) {
        const int quad_level = 4 + L;
        const int ncount = 100 << (L - 1);
        std::vector<Ball> fam = anchored;
        fam.insert(fam.end(), random_balls.begin(),
                   random_balls.begin() + std::min<std::size_t>(random_balls.size(),
                                                                std::size_t(ncount)));
        for (const Ball& b : fam) {
            if (!admissible(b)) continue;
            sup.offer_ball(ball_quotient(f, b, clip, r, quad_level), b);
        }
        rep.estimates.push_back({L, sup.value});
    }

    std::vector<double> est;
    for (auto& [lvl, e] : rep.estimates) est.push_back(e);
    rep.verdict = verdict_from(est, th);
    if (rep.verdict != Verdict::Diverging && est.back() >= th.saturation_ceiling)
        rep.verdict = Verdict::Diverging;
    rep.witness = sup.witness;
    return rep;
}

} // namespace

ConditionReport muckenhoupt_constant(const FieldOracle& f, double r, const Domain& omega,
                                     const Domain& outer_U, int levels, std::uint64_t seed,
                                     VerdictThresholds th) {
    return muck_impl(f, r, omega, outer_U, false, levels, seed, th);
}

double muckenhoupt_ball_quotient(const FieldOracle& f, const Ball& b, double r,
                                 int quad_level) {
    if (!(r > 1.0)) throw parameter_error("Muckenhoupt quotient needs r > 1");
    return ball_quotient(f, b, nullptr, r, quad_level);
}

ConditionReport global_muckenhoupt_constant(const FieldOracle& f, double r,
                                            const Domain& omega, int levels,
                                            std::uint64_t seed, VerdictThresholds th) {
    return muck_impl(f, r, omega, omega, true, levels, seed, th);
}

ClassifyReport classify_weight(const Weight& w, double p, double q, const Domain& omega,
                               const Domain& outer_U, int levels, std::uint64_t seed,
                               VerdictThresholds th) {
    if (!(1.0 <= p && p <= q)) throw parameter_error("classify_weight needs 1 <= p <= q");
    ClassifyReport rep;
    const double ka = w.k + w.alpha;
    rep.q = q;
    rep.gate_rhs = p + ka * std::max(1.0, p / w.dim);
    rep.gate = q <= rep.gate_rhs + 1e-12;
    rep.field = decompose_on_grid(w, omega, 1001);
    rep.sigma_z = z_constant(sigma_oracle(w), ka, omega, levels, seed, th);
    const double r = std::max(q, ka + 1.0);
    rep.omega_a = muckenhoupt_constant(omega_oracle(w), r, omega, outer_U, levels, seed, th);
    rep.overall = (rep.gate && rep.sigma_z.verdict == Verdict::Bounded &&
                   rep.omega_a.verdict == Verdict::Bounded)
                      ? Verdict::Bounded
                      : (rep.sigma_z.verdict == Verdict::Diverging ||
                                 rep.omega_a.verdict == Verdict::Diverging
                             ? Verdict::Diverging
                             : Verdict::Inconclusive);
    return rep;
}

} // namespace dphase
