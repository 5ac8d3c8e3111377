#include "dphase/polycover.hpp"

#include <algorithm>
#include <cmath>

namespace dphase {

double Polynomial::operator()(double t) const {
    double r = 0.0;
    for (std::size_t i = coeff.size(); i-- > 0;) r = r * t + coeff[i];
    return r;
}

bool IntervalCover::covers(double t) const {
    for (const auto& [s, tau] : intervals)
        if (t >= s && t <= tau) return true;
    return false;
}

double cover_ratio_bound(int k, double eps) {
    if (k <= 1) return 1.0;
    std::vector<double> c(std::size_t(k) + 1, 1.0);
    for (int j = 2; j <= k; ++j) {
        double prev = 1.0;
        for (int i = 0; i < j; ++i) prev = std::max(prev, c[std::size_t(i)]);
        c[std::size_t(j)] = prev * std::pow(eps, -2.0) * std::pow(2.0, j + 3);
    }
    return c[std::size_t(k)];
}

namespace {

double eval(const std::vector<double>& coeff, double t) {
    double r = 0.0;
    for (std::size_t i = coeff.size(); i-- > 0;) r = r * t + coeff[i];
    return r;
}

// Unique positive root of P1(t) - lambda_k t^k: nonnegative near 0, negative
// for large t, and a single sign change in between.
double head_crossing(const std::vector<double>& p1, double lam_k, int k) {
    auto g = [&](double t) { return eval(p1, t) - lam_k * std::pow(t, k); };
    double lo = 1.0, hi = 1.0;
    if (g(1.0) > 0.0) {
        while (g(hi) > 0.0 && hi < 1e150) hi *= 2.0;
    } else {
        while (g(lo) <= 0.0 && lo > 1e-150) lo *= 0.5;
        if (g(lo) <= 0.0) return lo;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

using Interval = std::pair<double, double>;

std::vector<Interval> build_cover(const std::vector<double>& coeff, double T, double eps) {
    const int k = int(coeff.size()) - 1;
    if (k <= 1 || T <= 0.0) return {};

    bool any_negative = false;
    int head_degree = -1;
    for (int i = 0; i < k; ++i) {
        if (coeff[std::size_t(i)] < 0.0) any_negative = true;
        if (coeff[std::size_t(i)] > 0.0) head_degree = i;
    }
    // All lower coefficients nonnegative: the guarantee holds everywhere.
    if (!any_negative) return {};
    // No positive part below the top: admissible only if the negative part
    // vanishes too; an empty cover is right then, and verify_cover guards.
    if (head_degree < 0) return {};

    std::vector<double> p1(coeff.begin(), coeff.begin() + k);
    for (double& c : p1) c = std::max(c, 0.0);

    const double t0 = head_crossing(p1, coeff[std::size_t(k)], k);
    const double t1 = std::min(t0, T);
    const double sub_T = eps * t1 / std::pow(2.0, k + 1);

    std::vector<double> head(coeff.begin(), coeff.begin() + head_degree + 1);
    std::vector<Interval> out = build_cover(head, sub_T, eps);

    Interval gap{sub_T, std::min(4.0 * t1 / eps, T)};
    bool merged = false;
    for (auto& iv : out) {
        if (iv.second >= sub_T * (1.0 - 1e-12)) {
            iv.second = gap.second;
            merged = true;
            break;
        }
    }
    if (!merged) out.push_back(gap);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

IntervalCover interval_cover(const Polynomial& P, double T, double eps) {
    const int k = P.degree();
    if (k < 0 || !(P.coeff.back() > 0.0))
        throw hypothesis_error("leading coefficient must be positive");
    if (!(eps > 0.0) || eps > 1.0) throw parameter_error("eps must lie in (0, 1]");
    if (!(T > 0.0)) throw parameter_error("T must be positive");

    // nonnegativity on [0, T], sampled
    double scale = 1.0;
    for (int i = 0; i <= 10000; ++i) scale = std::max(scale, std::abs(P(T * i / 10000.0)));
    for (int i = 0; i <= 10000; ++i) {
        const double t = T * i / 10000.0;
        if (P(t) < -1e-9 * scale)
            throw hypothesis_error("polynomial negative on [0, T]");
    }

    IntervalCover cover;
    cover.T = T;
    cover.eps = eps;
    cover.intervals = build_cover(P.coeff, T, eps);
    cover.ratio_bound = cover_ratio_bound(k, eps);
    cover.max_ratio = 0.0;
    for (auto& [s, tau] : cover.intervals) {
        s = std::max(s, 0.0);
        tau = std::min(tau, T);
        if (s > 0.0) cover.max_ratio = std::max(cover.max_ratio, tau / s);
    }
    return cover;
}

CoverCheck verify_cover(const Polynomial& P, double T, double eps, const IntervalCover& cover,
                        long samples) {
    if (samples < 1000) throw parameter_error("verify_cover needs samples >= 1000");
    const int k = P.degree();
    const double lam_k = P.coeff.back();
    const double floor_frac = eps / std::pow(2.0, k);
    CoverCheck check;
    for (long i = 0; i <= samples; ++i) {
        const double t = T * double(i) / double(samples);
        if (cover.covers(t)) continue;
        double head = 0.0;
        for (int j = k - 1; j >= 0; --j) head = head * t + P.coeff[std::size_t(j)];
        const double tk = lam_k * std::pow(t, k);
        if (head + eps * tk < floor_frac * tk - 1e-12) {
            check.ok = false;
            check.has_counterexample = true;
            check.counterexample = t;
            return check;
        }
    }
    return check;
}

int count_sign_changes_minima(const std::function<double(double)>& g, double a, double b,
                              long samples) {
    if (samples < 1000) throw parameter_error("count_sign_changes_minima needs samples >= 1000");
    int minima = 0;
    int last_dir = 0; // direction of the last non-flat step
    double prev = g(a);
    for (long i = 1; i <= samples; ++i) {
        const double t = a + (b - a) * double(i) / double(samples);
        const double cur = g(t);
        const int dir = cur > prev ? 1 : (cur < prev ? -1 : 0);
        if (dir != 0) {
            if (last_dir == -1 && dir == 1) ++minima;
            last_dir = dir;
        }
        prev = cur;
    }
    return minima;
}

NegativePowerBound negative_power_average_bound(const Weight& w, const DerivativeWindow& win) {
    if (win.order < 0 || win.order > w.k)
        throw parameter_error("window order exceeds weight smoothness");
    if (!(win.beta > win.order)) throw parameter_error("beta must exceed the window order");
    if (!(win.lower_fraction > 0.0) || win.lower_fraction > 1.0)
        throw parameter_error("lower fraction must lie in (0, 1]");
    if (!(win.upper_K > 0.0)) throw parameter_error("window bound K must be positive");

    // validate eps*K <= D^l a [v^l] <= K over sqrt(N) * ball
    const double probe_radius = win.ball.radius * std::sqrt(double(win.ball.dim));
    const double slack = 1e-9 * win.upper_K;
    for (int i = 0; i < 1000; ++i) {
        Point z = win.ball.center;
        if (win.ball.dim == 1) {
            z[0] += probe_radius * (2.0 * (i + 0.5) / 1000.0 - 1.0);
        } else {
            const double th = 2.0 * M_PI * i / 1000.0;
            const double rr = probe_radius * std::sqrt((i % 37 + 0.5) / 37.0);
            z[0] += rr * std::cos(th);
            z[1] += rr * std::sin(th);
        }
        const double d = win.order == 0 ? w.value(z) : w.deriv(z, win.order, win.direction);
        if (d < win.lower_fraction * win.upper_K - slack || d > win.upper_K + slack)
            throw hypothesis_error("derivative window violated on sqrt(N) * ball");
    }

    // in-ball argmin of a, 513-point scan, anchors the grading
    Point best = win.ball.center;
    double best_val = w.value(best);
    for (int i = 0; i < 513; ++i) {
        Point z = win.ball.center;
        if (win.ball.dim == 1) {
            z[0] += win.ball.radius * (2.0 * i / 512.0 - 1.0);
        } else {
            const double th = 2.0 * M_PI * i / 513.0;
            const double rr = win.ball.radius * std::sqrt((i + 0.5) / 513.0);
            z[0] += rr * std::cos(th);
            z[1] += rr * std::sin(th);
        }
        const double v = w.value(z);
        if (v < best_val) {
            best_val = v;
            best = z;
        }
    }

    const QuadratureRule rule = graded_quadrature(win.ball, best, 6);
    double mass = 0.0, volume = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Point& z = rule.nodes[i];
        if (win.ball.dim == 2 && dist(z, win.ball.center, 2) > win.ball.radius) continue;
        const double av = std::max(w.value(z), 1e-300);
        mass += rule.weights[i] * std::pow(av, -1.0 / win.beta);
        volume += rule.weights[i];
    }
    NegativePowerBound out;
    out.measured = std::pow(mass / volume, win.beta);
    out.bound_rhs_shape = std::pow(win.upper_K, -1.0) * std::pow(win.ball.radius, -win.order);
    return out;
}

} // namespace dphase
