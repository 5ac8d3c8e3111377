#include "dphase/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dphase/parallel.hpp"
#include "dphase/rng.hpp"

namespace dphase {

namespace {

double bump_raw(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

// d/ds exp(-1/(1-s^2)) = -2s/(1-s^2)^2 * exp(...)
double bump_raw_deriv(double s) {
    const double r2 = s * s;
    if (r2 >= 1.0) return 0.0;
    const double d = 1.0 - r2;
    return -2.0 * s / (d * d) * std::exp(-1.0 / d);
}

double integrate_01(const std::function<double(double)>& f, int panels) {
    double sum = 0.0;
    const double off = 0.5 / std::sqrt(3.0);
    for (int i = 0; i < panels; ++i) {
        const double a = double(i) / panels, b = double(i + 1) / panels;
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        sum += h * (f(m - h * 2.0 * off) + f(m + h * 2.0 * off));
    }
    return sum;
}

double unit_mass(int dim) {
    static const double m1 = 2.0 * integrate_01([](double s) { return bump_raw(s * s); }, 4096);
    static const double m2 =
        2.0 * M_PI *
        integrate_01([](double s) { return bump_raw(s * s) * s; }, 4096);
    return dim == 1 ? m1 : m2;
}

double unit_grad_l1(int dim) {
    static const double g1 =
        2.0 * integrate_01([](double s) { return std::abs(bump_raw_deriv(s)); }, 4096);
    static const double g2 =
        2.0 * M_PI *
        integrate_01([](double s) { return std::abs(bump_raw_deriv(s)) * s; }, 4096);
    return (dim == 1 ? g1 : g2) / unit_mass(dim);
}

} // namespace

ScalarField ScalarField::lattice(const Domain& d, int nx, int ny) {
    if (d.kind == DomainKind::Ball) throw parameter_error("lattice fields need interval/box domains");
    if (nx < 2 || (d.dim == 2 && ny < 2)) throw parameter_error("lattice needs >= 2 nodes per axis");
    ScalarField f;
    f.domain = d;
    f.nx = nx;
    f.ny = d.dim == 1 ? 1 : ny;
    f.values.assign(std::size_t(f.nx) * std::size_t(f.ny), 0.0);
    return f;
}

ScalarField ScalarField::sample(const Domain& d, int nx, int ny,
                                const std::function<double(const Point&)>& fn) {
    ScalarField f = lattice(d, nx, ny);
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) f.at(i, j) = fn(f.node(i, j));
    return f;
}

double ScalarField::dx() const { return (domain.hi[0] - domain.lo[0]) / (nx - 1); }
double ScalarField::dy() const { return ny > 1 ? (domain.hi[1] - domain.lo[1]) / (ny - 1) : 0.0; }

Point ScalarField::node(int i, int j) const {
    return {domain.lo[0] + dx() * i, ny > 1 ? domain.lo[1] + dy() * j : 0.0};
}

double ScalarField::eval(const Point& x) const {
    const double fx = (x[0] - domain.lo[0]) / dx();
    if (dim() == 1) {
        if (fx < 0.0 || fx > nx - 1) return vanishes_outside ? 0.0 : at(fx < 0.0 ? 0 : nx - 1);
        const int i = std::min(int(fx), nx - 2);
        const double t = fx - i;
        return (1.0 - t) * at(i) + t * at(i + 1);
    }
    const double fy = (x[1] - domain.lo[1]) / dy();
    if (fx < 0.0 || fx > nx - 1 || fy < 0.0 || fy > ny - 1) {
        if (vanishes_outside) return 0.0;
        const int i = std::clamp(int(fx), 0, nx - 1), j = std::clamp(int(fy), 0, ny - 1);
        return at(i, j);
    }
    const int i = std::min(int(fx), nx - 2), j = std::min(int(fy), ny - 2);
    const double t = fx - i, s = fy - j;
    return (1.0 - s) * ((1.0 - t) * at(i, j) + t * at(i + 1, j)) +
           s * ((1.0 - t) * at(i, j + 1) + t * at(i + 1, j + 1));
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::l1_norm() const {
    double sum = 0.0;
    if (dim() == 1) {
        for (int i = 0; i < nx; ++i) {
            const double w = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            sum += w * std::abs(at(i));
        }
        return sum * dx();
    }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double wi = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            const double wj = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
            sum += wi * wj * std::abs(at(i, j));
        }
    return sum * dx() * dy();
}

std::array<ScalarField, 2> gradient_fields(const ScalarField& u) {
    ScalarField gx = u, gy = u;
    auto sample = [&](int i, int j) -> double {
        if (i < 0 || i >= u.nx || j < 0 || j >= u.ny)
            return u.vanishes_outside
                       ? 0.0
                       : u.at(std::clamp(i, 0, u.nx - 1), std::clamp(j, 0, u.ny - 1));
        return u.at(i, j);
    };
    for (int j = 0; j < u.ny; ++j)
        for (int i = 0; i < u.nx; ++i) {
            gx.at(i, j) = (sample(i + 1, j) - sample(i - 1, j)) / (2.0 * u.dx());
            gy.at(i, j) = u.ny > 1 ? (sample(i, j + 1) - sample(i, j - 1)) / (2.0 * u.dy()) : 0.0;
        }
    return {gx, gy};
}

Point interpolant_gradient(const ScalarField& u, const Point& x) {
    const double fx = (x[0] - u.domain.lo[0]) / u.dx();
    if (u.dim() == 1) {
        if (fx < 0.0 || fx > u.nx - 1) return {0.0, 0.0};
        const int i = std::min(std::max(int(fx), 0), u.nx - 2);
        return {(u.at(i + 1) - u.at(i)) / u.dx(), 0.0};
    }
    const double fy = (x[1] - u.domain.lo[1]) / u.dy();
    if (fx < 0.0 || fx > u.nx - 1 || fy < 0.0 || fy > u.ny - 1) return {0.0, 0.0};
    const int i = std::min(std::max(int(fx), 0), u.nx - 2);
    const int j = std::min(std::max(int(fy), 0), u.ny - 2);
    const double t = fx - i, s = fy - j;
    const double gx = (1.0 - s) * (u.at(i + 1, j) - u.at(i, j)) +
                      s * (u.at(i + 1, j + 1) - u.at(i, j + 1));
    const double gy = (1.0 - t) * (u.at(i, j + 1) - u.at(i, j)) +
                      t * (u.at(i + 1, j + 1) - u.at(i + 1, j));
    return {gx / u.dx(), gy / u.dy()};
}

MollifierConfig MollifierConfig::make(const StarShape& star, double delta) {
    if (!(delta > 0.0) || !(delta < star.inner_radius / 4.0))
        throw config_error("mollifier needs 0 < delta < R/4");
    MollifierConfig cfg;
    cfg.star = star;
    cfg.delta = delta;
    return cfg;
}

double kernel_grad_l1(int dim) { return unit_grad_l1(dim); }

double kernel_eval(const MollifierConfig& cfg, const Point& x) {
    const int dim = cfg.star.domain.dim;
    const double d = cfg.delta;
    double r2 = (x[0] / d) * (x[0] / d);
    if (dim == 2) r2 += (x[1] / d) * (x[1] / d);
    const double scale = dim == 1 ? d : d * d;
    return bump_raw(r2) / (unit_mass(dim) * scale);
}

namespace {

// Discrete kernel: tensor Gauss-2 nodes over [-delta, delta]^N with weights
// renormalized so the rule integrates rho_delta to exactly 1; the discrete
// operator then preserves constants.
struct DiscreteKernel {
    std::vector<Point> nodes;
    std::vector<double> weights;
};

DiscreteKernel discrete_kernel(const MollifierConfig& cfg) {
    const int dim = cfg.star.domain.dim;
    const int panels = dim == 1 ? 48 : 24;
    const double d = cfg.delta;
    std::vector<double> xs, ws;
    const double off = 1.0 / std::sqrt(3.0);
    for (int i = 0; i < panels; ++i) {
        const double a = -d + 2.0 * d * i / panels, b = -d + 2.0 * d * (i + 1) / panels;
        const double m = 0.5 * (a + b), h = 0.5 * (b - a);
        xs.push_back(m - h * off);
        xs.push_back(m + h * off);
        ws.push_back(h);
        ws.push_back(h);
    }
    DiscreteKernel k;
    double total = 0.0;
    if (dim == 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const Point y{xs[i], 0.0};
            const double w = ws[i] * kernel_eval(cfg, y);
            if (w <= 0.0) continue;
            k.nodes.push_back(y);
            k.weights.push_back(w);
            total += w;
        }
    } else {
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const Point y{xs[i], xs[j]};
                const double w = ws[i] * ws[j] * kernel_eval(cfg, y);
                if (w <= 0.0) continue;
                k.nodes.push_back(y);
                k.weights.push_back(w);
                total += w;
            }
    }
    for (double& w : k.weights) w /= total;
    return k;
}

double mollify_with_kernel(const MollifierConfig& cfg, const DiscreteKernel& k,
                           const ScalarField& u, const Point& x) {
    const double kap = cfg.kappa();
    const Point x0 = cfg.star.center;
    const int dim = cfg.star.domain.dim;
    double sum = 0.0;
    for (std::size_t i = 0; i < k.nodes.size(); ++i) {
        Point arg = x0;
        for (int a = 0; a < dim; ++a) arg[a] = x0[a] + (x[a] - k.nodes[i][a] - x0[a]) / kap;
        sum += k.weights[i] * u.eval(arg);
    }
    return sum;
}

} // namespace

double mollify(const MollifierConfig& cfg, const ScalarField& u, const Point& x) {
    const DiscreteKernel k = discrete_kernel(cfg);
    return mollify_with_kernel(cfg, k, u, x);
}

namespace {

Point gradient_with_kernel(const MollifierConfig& cfg, const DiscreteKernel& k,
                           const ScalarField& u, const Point& x) {
    const double kap = cfg.kappa();
    const Point x0 = cfg.star.center;
    const int dim = cfg.star.domain.dim;
    Point out{0.0, 0.0};
    for (std::size_t i = 0; i < k.nodes.size(); ++i) {
        Point arg = x0;
        for (int a = 0; a < dim; ++a) arg[a] = x0[a] + (x[a] - k.nodes[i][a] - x0[a]) / kap;
        const Point g = interpolant_gradient(u, arg);
        out[0] += k.weights[i] * g[0];
        out[1] += k.weights[i] * g[1];
    }
    out[0] /= kap;
    out[1] /= kap;
    return out;
}

} // namespace

Point mollify_gradient(const MollifierConfig& cfg, const ScalarField& u, const Point& x) {
    const DiscreteKernel k = discrete_kernel(cfg);
    return gradient_with_kernel(cfg, k, u, x);
}

ScalarField mollify_field(const MollifierConfig& cfg, const ScalarField& u) {
    const DiscreteKernel k = discrete_kernel(cfg);
    ScalarField out = u;
    parallel_for(std::size_t(u.nx) * std::size_t(u.ny), [&](std::size_t idx) {
        const int i = int(idx % std::size_t(u.nx));
        const int j = int(idx / std::size_t(u.nx));
        out.at(i, j) = mollify_with_kernel(cfg, k, u, u.node(i, j));
    });
    return out;
}

BoundCheck check_linf_bound(const MollifierConfig& cfg, const ScalarField& u) {
    const DiscreteKernel k = discrete_kernel(cfg);
    double lhs = 0.0;
    for (int j = 0; j < u.ny; ++j)
        for (int i = 0; i < u.nx; ++i) {
            const Point g = gradient_with_kernel(cfg, k, u, u.node(i, j));
            lhs = std::max(lhs, std::hypot(g[0], g[1]));
        }
    BoundCheck out;
    out.lhs = lhs;
    out.rhs = (1.0 / cfg.delta) * u.max_abs() * kernel_grad_l1(u.dim());
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

BoundCheck check_holder_bound(const MollifierConfig& cfg, const ScalarField& u, double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw parameter_error("gamma must lie in (0, 1)");
    // Hoelder seminorm from lattice pairs: all adjacent pairs (they dominate
    // for rough fields) plus a seeded batch of long-range pairs.
    double semi = 0.0;
    for (int j = 0; j < u.ny; ++j)
        for (int i = 0; i + 1 < u.nx; ++i)
            semi = std::max(semi,
                            std::abs(u.at(i + 1, j) - u.at(i, j)) / std::pow(u.dx(), gamma));
    if (u.ny > 1)
        for (int j = 0; j + 1 < u.ny; ++j)
            for (int i = 0; i < u.nx; ++i)
                semi = std::max(semi, std::abs(u.at(i, j + 1) - u.at(i, j)) /
                                          std::pow(u.dy(), gamma));
    Rng rng(1234);
    for (int t = 0; t < 100000; ++t) {
        const int i1 = int(rng.next_below(std::uint64_t(u.nx)));
        const int i2 = int(rng.next_below(std::uint64_t(u.nx)));
        const int j1 = u.ny > 1 ? int(rng.next_below(std::uint64_t(u.ny))) : 0;
        const int j2 = u.ny > 1 ? int(rng.next_below(std::uint64_t(u.ny))) : 0;
        const double d = dist(u.node(i1, j1), u.node(i2, j2), u.dim());
        if (d <= 0.0) continue;
        semi = std::max(semi, std::abs(u.at(i1, j1) - u.at(i2, j2)) / std::pow(d, gamma));
    }
    BoundCheck out = check_linf_bound(cfg, u);
    out.rhs = std::pow(cfg.delta, gamma - 1.0) * std::pow(cfg.kappa(), -gamma) * semi *
              kernel_grad_l1(u.dim());
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
}

double maximal_function(const ScalarField& f, const Domain& U, const Point& x,
                        int ball_count) {
    if (!U.contains(x)) throw parameter_error("maximal_function needs x in U");
    if (ball_count < 1) throw parameter_error("maximal_function needs ball_count >= 1");

    Point lo, hi;
    U.bounding_box(lo, hi);
    // largest r with 3B(c, r) inside U (closed containment)
    auto admissible_radius = [&](const Point& c) {
        double r = std::numeric_limits<double>::infinity();
        for (int a = 0; a < U.dim; ++a) r = std::min({r, c[a] - lo[a], hi[a] - c[a]});
        if (U.kind == DomainKind::Ball) r = U.radius - dist(c, U.center, U.dim);
        return r / 3.0;
    };

    auto ball_avg = [&](const Point& c, double r) {
        double sum = 0.0, vol = 0.0;
        if (f.dim() == 1) {
            const int n = 512;
            for (int i = 0; i < n; ++i) {
                const Point z{c[0] - r + 2.0 * r * (i + 0.5) / n, 0.0};
                sum += std::abs(f.eval(z));
                vol += 1.0;
            }
        } else {
            const int n = 32;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Point z{c[0] - r + 2.0 * r * (i + 0.5) / n,
                                  c[1] - r + 2.0 * r * (j + 0.5) / n};
                    if (dist(z, c, 2) > r) continue;
                    sum += std::abs(f.eval(z));
                    vol += 1.0;
                }
        }
        return vol > 0.0 ? sum / vol : 0.0;
    };

    const double r0 = admissible_radius(x);
    if (!(r0 > 0.0)) return std::abs(f.eval(x));
    double best = 0.0;
    for (int j = 0; j < ball_count; ++j) {
        const double r = r0 * std::pow(2.0, -j);
        std::vector<Point> centers{x};
        for (int a = 0; a < U.dim; ++a) {
            Point cp = x, cm = x;
            cp[a] += 0.5 * r;
            cm[a] -= 0.5 * r;
            centers.push_back(cp);
            centers.push_back(cm);
        }
        for (const Point& c : centers) {
            if (dist(c, x, U.dim) >= r) continue;              // x must lie in B
            if (admissible_radius(c) < r - 1e-15) continue;    // 3B inside U
            best = std::max(best, ball_avg(c, r));
        }
    }
    return best;
}

} // namespace dphase
