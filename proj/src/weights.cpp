#include "dphase/weights.hpp"

#include <cmath>

#include "dphase/rng.hpp"

namespace dphase {

namespace {

double sup_over_directions(const std::function<double(const Point&)>& f) {
    // 64 angles, doubled until the running max moves by < 0.1%.
    int n = 64;
    double best = 0.0;
    for (int round = 0; round < 8; ++round) {
        double cur = best;
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * (i + 0.5) / n;
            cur = std::max(cur, std::abs(f({std::cos(th), std::sin(th)})));
        }
        if (round > 0 && cur <= best * 1.001) return cur;
        best = cur;
        n *= 2;
    }
    return best;
}

double hessian_sup(double h11, double h22, double h12) {
    const double m = 0.5 * (h11 + h22);
    const double s = std::hypot(0.5 * (h11 - h22), h12);
    return std::abs(m) + s;
}

} // namespace

double derivative_norm(const Weight& w, const Point& x, int l) {
    if (l < 0 || l > w.k) throw parameter_error("derivative order exceeds weight smoothness");
    if (l == 0) return w.value(x);
    if (w.dim == 1) return std::abs(w.deriv(x, l, {1.0, 0.0}));
    if (l == 1) return std::hypot(w.deriv(x, 1, {1.0, 0.0}), w.deriv(x, 1, {0.0, 1.0}));
    if (l == 2) {
        const double h11 = w.deriv(x, 2, {1.0, 0.0});
        const double h22 = w.deriv(x, 2, {0.0, 1.0});
        const double s = 1.0 / std::sqrt(2.0);
        const double hd = w.deriv(x, 2, {s, s});
        return hessian_sup(h11, h22, hd - 0.5 * (h11 + h22));
    }
    return sup_over_directions([&](const Point& v) { return w.deriv(x, l, v); });
}

double derivative_difference_norm(const Weight& w, const Point& x, const Point& y, int l) {
    if (l < 0 || l > w.k) throw parameter_error("derivative order exceeds weight smoothness");
    if (l == 0) return std::abs(w.value(x) - w.value(y));
    if (w.dim == 1)
        return std::abs(w.deriv(x, l, {1.0, 0.0}) - w.deriv(y, l, {1.0, 0.0}));
    if (l == 1)
        return std::hypot(w.deriv(x, 1, {1.0, 0.0}) - w.deriv(y, 1, {1.0, 0.0}),
                          w.deriv(x, 1, {0.0, 1.0}) - w.deriv(y, 1, {0.0, 1.0}));
    if (l == 2) {
        const double h11 = w.deriv(x, 2, {1.0, 0.0}) - w.deriv(y, 2, {1.0, 0.0});
        const double h22 = w.deriv(x, 2, {0.0, 1.0}) - w.deriv(y, 2, {0.0, 1.0});
        const double s = 1.0 / std::sqrt(2.0);
        const double hd = w.deriv(x, 2, {s, s}) - w.deriv(y, 2, {s, s});
        return hessian_sup(h11, h22, hd - 0.5 * (h11 + h22));
    }
    return sup_over_directions(
        [&](const Point& v) { return w.deriv(x, l, v) - w.deriv(y, l, v); });
}

double holder_seminorm_estimate(const Weight& w, const Domain& region, long pairs,
                                std::uint64_t seed) {
    if (pairs < 1) throw parameter_error("holder_seminorm_estimate needs pairs >= 1");
    Point lo, hi;
    region.bounding_box(lo, hi);
    Rng rng(seed);
    double best = 0.0;
    for (long i = 0; i < pairs; ++i) {
        Point x{0.0, 0.0}, y{0.0, 0.0};
        for (int a = 0; a < region.dim; ++a) {
            x[a] = rng.uniform(lo[a], hi[a]);
            y[a] = rng.uniform(lo[a], hi[a]);
        }
        if (!region.contains(x) || !region.contains(y)) continue;
        const double d = dist(x, y, region.dim);
        if (d <= 0.0) continue;
        best = std::max(best,
                        derivative_difference_norm(w, x, y, w.k) / std::pow(d, w.alpha));
    }
    return best;
}

Weight with_smoothness(const Weight& w, int k2, double alpha2) {
    if (k2 < 0 || k2 > w.k || !(alpha2 > 0.0) || alpha2 > 1.0 ||
        k2 + alpha2 > w.k + w.alpha + 1e-12)
        throw parameter_error("requested smoothness not weaker than the weight's");
    Weight v = w;
    v.k = k2;
    v.alpha = alpha2;
    v.holder_constant.reset();
    return v;
}

Weight scale_weight(const Weight& w, double lambda) {
    if (!(lambda > 0.0)) throw parameter_error("scale factor must be positive");
    Weight v = w;
    auto val = w.value;
    auto der = w.deriv;
    v.value = [val, lambda](const Point& x) { return lambda * val(x); };
    v.deriv = [der, lambda](const Point& x, int l, const Point& dir) {
        return lambda * der(x, l, dir);
    };
    if (w.holder_constant) v.holder_constant = *w.holder_constant * lambda;
    return v;
}

namespace {

double vpow(double v, int l) {
    double r = 1.0;
    for (int i = 0; i < l; ++i) r *= v;
    return r;
}

Weight make_power2n(int n) {
    if (n < 1) throw parameter_error("power2n needs n >= 1");
    Weight w;
    w.dim = 1;
    w.k = 2 * n - 1;
    w.alpha = 1.0;
    w.domain = Domain::interval(-4.0, 4.0);
    w.value = [n](const Point& p) { return std::pow(p[0], 2 * n); };
    w.deriv = [n](const Point& p, int l, const Point& dir) {
        double c = 1.0;
        for (int j = 0; j < l; ++j) c *= double(2 * n - j);
        return c * std::pow(p[0], 2 * n - l) * vpow(dir[0], l);
    };
    double fact = 1.0;
    for (int j = 2; j <= 2 * n; ++j) fact *= j;
    w.holder_constant = fact;
    return w;
}

Weight make_gauss_flat() {
    Weight w;
    w.dim = 1;
    w.k = 2;
    w.alpha = 1.0;
    w.domain = Domain::interval(-4.0, 4.0);
    auto a = [](double t) { return t == 0.0 ? 0.0 : std::exp(-1.0 / (t * t)); };
    w.value = [a](const Point& p) { return a(p[0]); };
    w.deriv = [a](const Point& p, int l, const Point& dir) {
        const double t = p[0];
        if (t == 0.0) return l == 0 ? 0.0 : 0.0;
        const double e = a(t);
        double d = e;
        if (l == 1) d = 2.0 / (t * t * t) * e;
        if (l == 2) d = (4.0 / std::pow(t, 6) - 6.0 / std::pow(t, 4)) * e;
        return d * vpow(dir[0], l);
    };
    return w;
}

Weight make_sin6() {
    Weight w;
    w.dim = 1;
    w.k = 2;
    w.alpha = 1.0;
    w.domain = Domain::interval(-4.0, 4.0);
    w.value = [](const Point& p) {
        const double t = p[0];
        if (t == 0.0) return 0.0;
        const double s = std::sin(1.0 / t);
        return std::pow(t, 6) * s * s;
    };
    w.deriv = [](const Point& p, int l, const Point& dir) {
        const double t = p[0];
        if (t == 0.0) return 0.0;
        const double s = std::sin(1.0 / t);
        double d = std::pow(t, 6) * s * s;
        if (l == 1) d = 6.0 * std::pow(t, 5) * s * s - std::pow(t, 4) * std::sin(2.0 / t);
        if (l == 2)
            d = 30.0 * std::pow(t, 4) * s * s - 10.0 * std::pow(t, 3) * std::sin(2.0 / t) +
                2.0 * t * t * std::cos(2.0 / t);
        return d * vpow(dir[0], l);
    };
    return w;
}

Weight make_sin6_sigma_part() {
    Weight w;
    w.dim = 1;
    w.k = 2;
    w.alpha = 1.0;
    w.domain = Domain::interval(-4.0, 4.0);
    w.value = [](const Point& p) { return std::pow(p[0], 4); };
    w.deriv = [](const Point& p, int l, const Point& dir) {
        const double t = p[0];
        double d = std::pow(t, 4);
        if (l == 1) d = 4.0 * t * t * t;
        if (l == 2) d = 12.0 * t * t;
        return d * vpow(dir[0], l);
    };
    w.holder_constant = 24.0 * 4.0; // sup |a'''| on the domain
    return w;
}

Weight make_sin6_omega_part() {
    Weight w;
    w.dim = 1;
    w.k = 0;
    w.alpha = 1.0;
    w.domain = Domain::interval(-4.0, 4.0);
    auto a = [](double t) {
        if (t == 0.0) return 0.0;
        const double s = std::sin(1.0 / t);
        return t * t * s * s;
    };
    w.value = [a](const Point& p) { return a(p[0]); };
    w.deriv = [a](const Point& p, int l, const Point&) {
        (void)l; // k = 0, only the value is exposed
        return a(p[0]);
    };
    return w;
}

Weight make_abs_power(double beta) {
    if (!(beta > 0.0)) throw parameter_error("abs_power needs beta > 0");
    Weight w;
    w.dim = 1;
    const int k = int(std::ceil(beta)) - 1;
    w.k = k;
    w.alpha = beta - k;
    w.domain = Domain::interval(-4.0, 4.0);
    w.value = [beta](const Point& p) { return std::pow(std::abs(p[0]), beta); };
    w.deriv = [beta](const Point& p, int l, const Point& dir) {
        const double t = p[0];
        double c = 1.0;
        for (int j = 0; j < l; ++j) c *= beta - j;
        if (t == 0.0) return l == 0 ? 0.0 : 0.0;
        const double sgn = t < 0.0 ? -1.0 : 1.0;
        return c * std::pow(std::abs(t), beta - l) * vpow(sgn, l) * vpow(dir[0], l);
    };
    return w;
}

Weight make_constant(double c) {
    if (c < 0.0) throw parameter_error("constant weight must be nonnegative");
    Weight w;
    w.dim = 1;
    w.k = 2;
    w.alpha = 1.0;
    w.domain = Domain::interval(-4.0, 4.0);
    w.value = [c](const Point&) { return c; };
    w.deriv = [c](const Point&, int l, const Point&) { return l == 0 ? c : 0.0; };
    w.holder_constant = 0.0;
    return w;
}

struct ParsedName {
    std::string base;
    std::optional<double> param;
};

ParsedName parse_name(const std::string& name) {
    const auto colon = name.find(':');
    if (colon == std::string::npos) return {name, std::nullopt};
    try {
        return {name.substr(0, colon), std::stod(name.substr(colon + 1))};
    } catch (const std::exception&) {
        throw catalog_error("bad catalog parameter in '" + name + "'");
    }
}

} // namespace

CatalogEntry catalog_get(const std::string& name) {
    const ParsedName pn = parse_name(name);
    CatalogEntry e;
    e.name = name;
    if (pn.base == "power2n") {
        const int n = int(pn.param.value_or(1.0));
        e.weight = make_power2n(n);
        const double dn = 2.0 * n;
        e.claims = {
            {"Z", dn, "bounded", "t^(2n) decays at rate exactly 2n"},
            {"Z", dn + 0.5, "diverging", "decay rate of t^(2n) cannot exceed 2n"},
            {"A", dn + 1.5, "bounded", "t^(-2n/(r-1)) integrable for r > 2n+1"},
            {"A", dn + 0.9, "diverging", "t^(-2n/(r-1)) non-integrable for r <= 2n+1"},
        };
    } else if (pn.base == "gauss_flat") {
        e.weight = make_gauss_flat();
        e.claims = {
            {"Z", 1.0, "bounded", "exp(-1/t^2) decays faster than any power"},
            {"Z", 3.0, "bounded", "exp(-1/t^2) decays faster than any power"},
            {"Z", 6.0, "bounded", "exp(-1/t^2) decays faster than any power"},
            {"A", 2.0, "diverging", "negative powers of exp(-1/t^2) are non-integrable"},
            {"A", 4.0, "diverging", "negative powers of exp(-1/t^2) are non-integrable"},
            {"A", 8.0, "diverging", "negative powers of exp(-1/t^2) are non-integrable"},
        };
    } else if (pn.base == "sin6") {
        e.weight = make_sin6();
        e.claims = {
            {"Z", 3.0, "diverging", "zeros at 1/(n*pi) carry only quadratic decay"},
            {"A", 4.0, "diverging",
             "sum over zeros of per-zero averages diverges near the origin"},
        };
    } else if (pn.base == "sin6_sigma_part") {
        e.weight = make_sin6_sigma_part();
        e.claims = {{"Z", 3.0, "bounded", "t^4 decays at rate 4 >= 3"}};
    } else if (pn.base == "sin6_omega_part") {
        e.weight = make_sin6_omega_part();
        e.claims = {{"A", 4.0, "bounded",
                     "|t sin(1/t)|^(-2/3) has integrable zeros, summable near 0"}};
    } else if (pn.base == "abs_power") {
        const double beta = pn.param.value_or(1.5);
        e.weight = make_abs_power(beta);
        e.claims = {{"Z", beta, "bounded", "|t|^beta decays at rate exactly beta"}};
    } else if (pn.base == "constant") {
        e.weight = make_constant(pn.param.value_or(1.0));
        e.claims = {
            {"Z", 1.0, "bounded", "constant weights lie in every decay class"},
            {"A", 2.0, "bounded", "both averages cancel for constants"},
        };
    } else if (pn.base == "holder_dist") {
        const double a = pn.param.value_or(0.5);
        if (!(a > 0.0) || a > 1.0) throw catalog_error("holder_dist needs alpha in (0,1]");
        e.weight = make_abs_power(a);
        e.claims = {{"Z", a, "bounded", "|t|^alpha decays at rate exactly alpha"}};
    } else {
        throw catalog_error("unknown catalog entry '" + name + "'");
    }
    return e;
}

std::vector<std::string> catalog_names() {
    return {"power2n:1",        "gauss_flat", "sin6",       "sin6_sigma_part",
            "sin6_omega_part",  "abs_power:1.5", "constant:1", "holder_dist:0.5"};
}

} // namespace dphase
