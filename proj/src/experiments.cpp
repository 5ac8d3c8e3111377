#include "dphase/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dphase {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void tri_cell(MeshCell& c, const std::vector<Point>& nodes, int a, int b, int cc) {
    const Point &A = nodes[std::size_t(a)], &B = nodes[std::size_t(b)], &C = nodes[std::size_t(cc)];
    const double area2 = (B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]);
    c.nverts = 3;
    c.node[0] = a;
    c.node[1] = b;
    c.node[2] = cc;
    c.volume = 0.5 * std::abs(area2);
    // grad of nodal basis: rotated opposite edge over twice the signed area
    c.gx[0] = (B[1] - C[1]) / area2;
    c.gy[0] = (C[0] - B[0]) / area2;
    c.gx[1] = (C[1] - A[1]) / area2;
    c.gy[1] = (A[0] - C[0]) / area2;
    c.gx[2] = (A[1] - B[1]) / area2;
    c.gy[2] = (B[0] - A[0]) / area2;
}

} // namespace

Mesh build_mesh(const EnergySpec& spec, int mesh_level) {
    if (mesh_level < 0) throw parameter_error("mesh level must be >= 0");
    Mesh mesh;
    mesh.dim = spec.omega.dim;
    const Weight& w = spec.weight;

    if (spec.omega.kind == DomainKind::Interval) {
        const int ncells = 16 << mesh_level;
        const double a = spec.omega.lo[0], b = spec.omega.hi[0];
        const double h = (b - a) / ncells;
        for (int i = 0; i <= ncells; ++i) mesh.nodes.push_back({a + h * i, 0.0});
        mesh.is_boundary.assign(mesh.nodes.size(), 0);
        mesh.is_boundary.front() = 1;
        mesh.is_boundary.back() = 1;
        for (int i = 0; i < ncells; ++i) {
            MeshCell c;
            c.nverts = 2;
            c.node[0] = i;
            c.node[1] = i + 1;
            c.volume = h;
            c.gx[0] = -1.0 / h;
            c.gx[1] = 1.0 / h;
            c.a_integral = cell_weight_integral_1d(w, a + h * i, a + h * (i + 1), spec.quad_level);
            mesh.cells.push_back(c);
        }
        return mesh;
    }

    if (spec.omega.kind == DomainKind::Box) {
        const int n = 4 << mesh_level;
        const double ax = spec.omega.lo[0], ay = spec.omega.lo[1];
        const double hx = (spec.omega.hi[0] - ax) / n, hy = (spec.omega.hi[1] - ay) / n;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) mesh.nodes.push_back({ax + hx * i, ay + hy * j});
        mesh.is_boundary.assign(mesh.nodes.size(), 0);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i)
                if (i == 0 || j == 0 || i == n || j == n)
                    mesh.is_boundary[std::size_t(j) * (n + 1) + std::size_t(i)] = 1;
        auto id = [n](int i, int j) { return j * (n + 1) + i; };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                MeshCell c1, c2;
                tri_cell(c1, mesh.nodes, id(i, j), id(i + 1, j), id(i + 1, j + 1));
                tri_cell(c2, mesh.nodes, id(i, j), id(i + 1, j + 1), id(i, j + 1));
                c1.a_integral = c1.volume * cell_weight_average_tri(w, mesh.nodes[id(i, j)],
                                                                    mesh.nodes[id(i + 1, j)],
                                                                    mesh.nodes[id(i + 1, j + 1)],
                                                                    spec.quad_level);
                c2.a_integral = c2.volume * cell_weight_average_tri(w, mesh.nodes[id(i, j)],
                                                                    mesh.nodes[id(i + 1, j + 1)],
                                                                    mesh.nodes[id(i, j + 1)],
                                                                    spec.quad_level);
                mesh.cells.push_back(c1);
                mesh.cells.push_back(c2);
            }
        return mesh;
    }

    // disk: ring-wise polar mesh, fan triangles at the center
    const int nr = 6 << mesh_level;
    const int nphi = 12 << mesh_level;
    const double R = spec.omega.radius;
    const Point c0 = spec.omega.center;
    mesh.nodes.push_back(c0);
    for (int i = 1; i <= nr; ++i)
        for (int j = 0; j < nphi; ++j) {
            const double r = R * i / nr, t = 2.0 * M_PI * j / nphi;
            mesh.nodes.push_back({c0[0] + r * std::cos(t), c0[1] + r * std::sin(t)});
        }
    mesh.is_boundary.assign(mesh.nodes.size(), 0);
    auto rid = [nphi](int i, int j) { return 1 + (i - 1) * nphi + (j % nphi); };
    for (int j = 0; j < nphi; ++j) mesh.is_boundary[std::size_t(rid(nr, j))] = 1;
    auto add_tri = [&](int a, int b, int cc) {
        MeshCell c;
        tri_cell(c, mesh.nodes, a, b, cc);
        c.a_integral = c.volume * cell_weight_average_tri(w, mesh.nodes[std::size_t(a)],
                                                          mesh.nodes[std::size_t(b)],
                                                          mesh.nodes[std::size_t(cc)],
                                                          spec.quad_level);
        mesh.cells.push_back(c);
    };
    for (int j = 0; j < nphi; ++j) add_tri(0, rid(1, j), rid(1, j + 1));
    for (int i = 1; i < nr; ++i)
        for (int j = 0; j < nphi; ++j) {
            add_tri(rid(i, j), rid(i + 1, j), rid(i + 1, j + 1));
            add_tri(rid(i, j), rid(i + 1, j + 1), rid(i, j + 1));
        }
    return mesh;
}

namespace {

double cell_grad_norm(const MeshCell& c, const std::vector<double>& u) {
    double gx = 0.0, gy = 0.0;
    for (int v = 0; v < c.nverts; ++v) {
        gx += u[std::size_t(c.node[v])] * c.gx[v];
        gy += u[std::size_t(c.node[v])] * c.gy[v];
    }
    return std::hypot(gx, gy);
}

} // namespace

EnergyValue mesh_energy(const Mesh& mesh, const std::vector<double>& u, double p, double q) {
    EnergyValue e;
    for (const MeshCell& c : mesh.cells) {
        const double s = cell_grad_norm(c, u);
        e.p_term += c.volume * std::pow(s, p);
        e.q_term += c.a_integral * std::pow(s, q);
    }
    e.total = e.p_term + e.q_term;
    return e;
}

namespace {

// Smoothed objective used inside the solver: Huber p-term when p = 1.
struct SolverProblem {
    const Mesh& mesh;
    double p, q, mu; // mu = 0 means no smoothing

    double phi_p(double s) const {
        if (mu > 0.0) return s <= mu ? s * s / (2.0 * mu) : s - 0.5 * mu;
        return std::pow(s, p);
    }
    double dphi_p(double s) const {
        if (mu > 0.0) return s <= mu ? s / mu : 1.0;
        return p * std::pow(s, p - 1.0);
    }

    double value(const std::vector<double>& u) const {
        double total = 0.0;
        for (const MeshCell& c : mesh.cells) {
            const double s = cell_grad_norm(c, u);
            total += c.volume * phi_p(s) + c.a_integral * std::pow(s, q);
        }
        return total;
    }

    void gradient(const std::vector<double>& u, std::vector<double>& g) const {
        std::fill(g.begin(), g.end(), 0.0);
        for (const MeshCell& c : mesh.cells) {
            double gx = 0.0, gy = 0.0;
            for (int v = 0; v < c.nverts; ++v) {
                gx += u[std::size_t(c.node[v])] * c.gx[v];
                gy += u[std::size_t(c.node[v])] * c.gy[v];
            }
            const double s = std::hypot(gx, gy);
            if (s <= 0.0) continue;
            const double coef =
                (c.volume * dphi_p(s) + c.a_integral * q * std::pow(s, q - 1.0)) / s;
            for (int v = 0; v < c.nverts; ++v)
                g[std::size_t(c.node[v])] += coef * (gx * c.gx[v] + gy * c.gy[v]);
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            if (mesh.is_boundary[i]) g[i] = 0.0;
    }
};

struct SolveOutput {
    std::vector<double> u;
    int iterations = 0;
    double residual = 0.0;
    bool monotone = true;
};

// Monotone accelerated gradient descent with backtracking on the step size.
SolveOutput accelerated_descent(const SolverProblem& prob, std::vector<double> x0,
                                double tol, long max_iters) {
    const std::size_t n = x0.size();
    std::vector<double> x = x0, y = x0, z(n), g(n), xprev(n);
    double fx = prob.value(x);
    if (!std::isfinite(fx)) throw config_error("non-finite energy at the initial iterate");
    double L = 1.0, t = 1.0;
    SolveOutput out;
    out.u = x;

    auto inf_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double a : v) m = std::max(m, std::abs(a));
        return m;
    };

    long iter = 0;
    double res = kInf;
    for (; iter < max_iters; ++iter) {
        prob.gradient(y, g);
        const double fy = prob.value(y);
        L = std::max(L * 0.7, 1e-12);
        double fz = kInf;
        while (true) {
            double quad = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                z[i] = y[i] - g[i] / L;
                const double d = z[i] - y[i];
                quad += g[i] * d + 0.5 * L * d * d;
            }
            fz = prob.value(z);
            if (std::isfinite(fz) && fz <= fy + quad + 1e-12 * std::abs(fy) + 1e-300) break;
            L *= 2.0;
            if (L > 1e30) throw config_error("descent diverged: backtracking exhausted");
        }
        xprev = x;
        if (fz <= fx) {
            x = z;
            fx = fz;
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            for (std::size_t i = 0; i < n; ++i)
                y[i] = x[i] + ((t - 1.0) / tn) * (x[i] - xprev[i]);
            t = tn;
        } else {
            // accelerated point overshot: drop the momentum and descend from x
            t = 1.0;
            y = x;
        }
        res = inf_norm(g);
        if (res <= tol) {
            ++iter;
            break;
        }
    }
    prob.gradient(x, g);
    out.u = x;
    out.iterations = int(iter);
    out.residual = inf_norm(g);
    return out;
}

// Bilinear interpolation on the structured polar grid (nr rings, nphi
// angles, ring 0 collapsed to the center node).
double polar_interp(const std::vector<double>& u, int nr, int nphi, const Point& center,
                    double R, const Point& x) {
    const double dx0 = x[0] - center[0], dy0 = x[1] - center[1];
    const double r = std::hypot(dx0, dy0);
    double phi = std::atan2(dy0, dx0);
    if (phi < 0.0) phi += 2.0 * M_PI;
    const double fr = std::min(r / R * nr, double(nr));
    const double fp = phi / (2.0 * M_PI) * nphi;
    const int i0 = std::min(int(fr), nr - 1);
    const int j0 = int(fp) % nphi;
    const double tr = fr - i0, tp = fp - int(fp);
    auto val = [&](int ri, int pj) {
        if (ri == 0) return u[0];
        return u[std::size_t(1 + (ri - 1) * nphi + (pj % nphi))];
    };
    return (1.0 - tr) * ((1.0 - tp) * val(i0, j0) + tp * val(i0, j0 + 1)) +
           tr * ((1.0 - tp) * val(i0 + 1, j0) + tp * val(i0 + 1, j0 + 1));
}

ScalarField lattice_view(const Mesh& mesh, const std::vector<double>& u,
                         const EnergySpec& spec) {
    if (spec.omega.kind == DomainKind::Interval) {
        ScalarField f = ScalarField::lattice(spec.omega, int(mesh.nodes.size()));
        f.values = u;
        f.vanishes_outside = false;
        return f;
    }
    if (spec.omega.kind == DomainKind::Box) {
        int n = 0;
        while (std::size_t(n + 1) * std::size_t(n + 1) < mesh.nodes.size()) ++n;
        ScalarField f = ScalarField::lattice(spec.omega, n + 1, n + 1);
        f.values = u;
        f.vanishes_outside = false;
        return f;
    }
    // disk: resample through the structured polar grid
    const Domain bb = Domain::box(spec.omega.center[0] - spec.omega.radius,
                                  spec.omega.center[0] + spec.omega.radius,
                                  spec.omega.center[1] - spec.omega.radius,
                                  spec.omega.center[1] + spec.omega.radius);
    const int res = 129;
    // built disk meshes have nphi = 2 * nr, so nodes = 1 + 2 * nr^2
    const int nr = int(std::lround(std::sqrt(double(mesh.nodes.size() - 1) / 2.0)));
    const int nphi = 2 * nr;
    if (1 + std::size_t(nr) * std::size_t(nphi) != mesh.nodes.size())
        throw config_error("unrecognized disk mesh layout");
    ScalarField f = ScalarField::lattice(bb, res, res);
    f.vanishes_outside = false;
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
            const Point x = f.node(i, j);
            const double r = dist(x, spec.omega.center, 2);
            f.at(i, j) = r > spec.omega.radius
                             ? 0.0
                             : polar_interp(u, nr, nphi, spec.omega.center,
                                            spec.omega.radius, x);
        }
    return f;
}

} // namespace

MinimizationResult minimize_discrete(const EnergySpec& spec, int mesh_level,
                                     const std::function<double(const Point&)>& u0,
                                     double tol, long max_iters,
                                     const std::function<double(const Point&)>* warm_start) {
    const Mesh mesh = build_mesh(spec, mesh_level);
    std::vector<double> init(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const bool pinned = mesh.is_boundary[i] != 0;
        init[i] = pinned || !warm_start ? u0(mesh.nodes[i]) : (*warm_start)(mesh.nodes[i]);
    }
    const EnergyValue e0 = mesh_energy(mesh, init, spec.p, spec.q);
    if (!std::isfinite(e0.total))
        throw config_error("boundary datum has no finite-energy extension on this mesh");

    SolverProblem prob{mesh, spec.p, spec.q, 0.0};
    if (spec.p == 1.0) prob.mu = 1e-6;

    SolveOutput sol = accelerated_descent(prob, init, tol, max_iters);

    MinimizationResult res;
    res.mesh_level = mesh_level;
    res.node_values = sol.u;
    res.energy_parts = mesh_energy(mesh, sol.u, spec.p, spec.q);
    res.energy = res.energy_parts.total;
    res.iterations = sol.iterations;
    res.residual = sol.residual;
    res.monotone = sol.monotone;
    res.minimizer = lattice_view(mesh, sol.u, spec);
    return res;
}

std::string gap_verdict_name(GapVerdict v) {
    switch (v) {
        case GapVerdict::GapConsistent: return "gap-consistent";
        case GapVerdict::AbsenceConsistent: return "absence-consistent";
        default: return "inconclusive";
    }
}

GapReport absence_experiment(const Weight& w, double p, double q,
                             const std::vector<int>& mesh_levels, const StarShape& star,
                             double stabilization, double solver_tol) {
    if (mesh_levels.size() < 2) throw parameter_error("absence experiment needs >= 2 levels");
    const double kappa = w.k + w.alpha;
    const double rhs = p + kappa * std::max(1.0, p / w.dim);
    if (!(q <= rhs + 1e-12)) {
        std::ostringstream msg;
        msg << "gate refused: q <= p + (k+alpha)*max(1, p/N) is " << q << " <= " << rhs
            << ", false";
        throw gate_refused(msg.str());
    }

    const EnergySpec spec = EnergySpec::make(p, q, w, star.domain, 3);
    Point lo, hi;
    star.domain.bounding_box(lo, hi);
    auto u0 = [lo, hi](const Point& x) { return (x[0] - lo[0]) / (hi[0] - lo[0]); };

    GapReport rep;
    MinimizationResult finest;
    for (int lvl : mesh_levels) {
        finest = minimize_discrete(spec, lvl, u0, solver_tol);
        rep.minima.push_back(finest.energy);
    }
    const std::size_t n = rep.minima.size();
    rep.minima_stabilized =
        std::abs(rep.minima[n - 1] - rep.minima[n - 2]) <=
        stabilization * std::max(rep.minima[n - 1], 1e-30);

    // pipeline on the finest minimizer: mollify v = u - u0 and re-attach u0
    ScalarField u0_field = finest.minimizer;
    for (int j = 0; j < u0_field.ny; ++j)
        for (int i = 0; i < u0_field.nx; ++i) u0_field.at(i, j) = u0(u0_field.node(i, j));
    rep.competitor_energy = energy(u0_field, spec).total;

    ScalarField v = finest.minimizer;
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] -= u0_field.values[i];
    v.vanishes_outside = true;

    const double R = star.inner_radius;
    bool converged = false;
    for (double d : {R / 8.0, R / 16.0, R / 32.0, R / 64.0}) {
        const MollifierConfig cfg = MollifierConfig::make(star, d);
        ScalarField wd = mollify_field(cfg, v);
        for (std::size_t i = 0; i < wd.values.size(); ++i) wd.values[i] += u0_field.values[i];
        const double ed = energy(wd, spec).total;
        rep.pipeline_energies.push_back(ed);
        converged = std::abs(ed - finest.energy) <= stabilization * finest.energy;
    }

    rep.margin = rep.minima.back() / std::max(rep.competitor_energy, 1e-30) - 1.0;
    rep.verdict = (rep.minima_stabilized && converged) ? GapVerdict::AbsenceConsistent
                                                       : GapVerdict::Inconclusive;
    return rep;
}

namespace {

// angular distance to the closed double cone of half-angle theta around the
// first axis
double cone_angular_gap(double phi, double theta) {
    double a = std::abs(std::remainder(phi, 2.0 * M_PI)); // in [0, pi]
    const double m = std::min(a, M_PI - a);
    return std::max(0.0, m - theta);
}

struct ProfileEnergy {
    double rp = 0.0;      // radial integral of the p-term
    double rq = 0.0;      // radial integral of the q-term (or penalty)
    bool rq_infinite = false;
    double k_alpha = 1.0;
    double p = 1.0, q = 1.0;
    double theta = 0.3;
    bool single_phase = false;

    double seg_s(double phi_mid) const {
        return std::sin(cone_angular_gap(phi_mid, theta));
    }

    // separable segment energies over the periodic profile
    double value(const std::vector<double>& v) const {
        const int n = int(v.size());
        const double dphi = 2.0 * M_PI / n;
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            const double dv = v[std::size_t((j + 1) % n)] - v[std::size_t(j)];
            const double slope = std::abs(dv) / dphi;
            total += rp * std::pow(slope, p) * dphi;
            if (!single_phase) {
                const double phi_mid = -M_PI + dphi * (j + 0.5);
                const double sb = std::pow(seg_s(phi_mid), k_alpha);
                if (sb > 0.0) total += rq * sb * std::pow(slope, q) * dphi;
            }
        }
        return total;
    }

    void gradient(const std::vector<double>& v, std::vector<double>& g) const {
        const int n = int(v.size());
        const double dphi = 2.0 * M_PI / n;
        std::fill(g.begin(), g.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const double dv = v[std::size_t((j + 1) % n)] - v[std::size_t(j)];
            const double slope = std::abs(dv) / dphi;
            if (slope <= 0.0) continue;
            double d_dslope = rp * p * std::pow(slope, p - 1.0);
            if (!single_phase) {
                const double phi_mid = -M_PI + dphi * (j + 0.5);
                const double sb = std::pow(seg_s(phi_mid), k_alpha);
                if (sb > 0.0) d_dslope += rq * sb * q * std::pow(slope, q - 1.0);
            }
            const double sgn = dv >= 0.0 ? 1.0 : -1.0;
            g[std::size_t((j + 1) % n)] += d_dslope * sgn;
            g[std::size_t(j)] -= d_dslope * sgn;
        }
    }
};

// +1 above the cone, -1 below, transitions inside the cone arcs. When the
// radial q-integral diverges, every segment carrying slope must sit inside
// the closed cone (midpoints included), so the free arc shrinks by one node
// spacing; data nodes then pin the junction segments to zero slope.
std::vector<char> profile_free_mask(int n, double theta, bool confine_to_cone,
                                    std::vector<double>& init) {
    std::vector<char> free_node(std::size_t(n), 0);
    init.assign(std::size_t(n), 0.0);
    const double dphi = 2.0 * M_PI / n;
    const double arc = confine_to_cone ? theta - dphi : theta;
    if (!(arc > 0.0)) throw config_error("cone too narrow for the angular grid");
    for (int j = 0; j < n; ++j) {
        const double phi = -M_PI + dphi * j;
        const double from_pi = std::remainder(phi - M_PI, 2.0 * M_PI); // in [-pi, pi)
        if (std::abs(phi) <= arc) {
            free_node[std::size_t(j)] = 1;
            init[std::size_t(j)] = std::clamp(phi / arc, -1.0, 1.0);
        } else if (std::abs(from_pi) <= arc) {
            free_node[std::size_t(j)] = 1;
            init[std::size_t(j)] = std::clamp(-from_pi / arc, -1.0, 1.0);
        } else if (phi > 0.0) {
            init[std::size_t(j)] = 1.0;
        } else {
            init[std::size_t(j)] = -1.0;
        }
    }
    return free_node;
}

} // namespace

Weight cone_weight(const GapConfig& cfg) {
    Weight w;
    w.dim = 2;
    w.k = std::max(0, int(std::ceil(cfg.k_alpha)) - 1);
    w.alpha = cfg.k_alpha - w.k;
    w.domain = Domain::box(-2.0, 2.0, -2.0, 2.0);
    if (cfg.single_phase) {
        w.value = [](const Point&) { return 0.0; };
        w.deriv = [](const Point&, int, const Point&) { return 0.0; };
        return w;
    }
    const double theta = cfg.cone_half_angle, ka = cfg.k_alpha;
    w.value = [theta, ka](const Point& x) {
        const double r = std::hypot(x[0], x[1]);
        if (r == 0.0) return 0.0;
        const double gap = cone_angular_gap(std::atan2(x[1], x[0]), theta);
        return std::pow(r * std::sin(gap), ka);
    };
    w.deriv = [w](const Point& x, int l, const Point&) {
        return l == 0 ? w.value(x) : 0.0; // only the value oracle is exposed
    };
    return w;
}

double angular_oracle(const GapConfig& cfg, std::vector<double>* profile_out) {
    if (!(cfg.p >= 1.0) || !(cfg.p < 2.0))
        throw config_error("0-homogeneous competitors need p in [1, 2)");
    if (!(cfg.cone_half_angle > 0.0) || !(cfg.cone_half_angle < M_PI / 2.0))
        throw config_error("cone half-angle must lie in (0, pi/2)");
    const double q_eff = cfg.single_phase ? cfg.p : cfg.q;

    ProfileEnergy pe;
    pe.p = cfg.p;
    pe.q = q_eff;
    pe.k_alpha = cfg.k_alpha;
    pe.theta = cfg.cone_half_angle;
    pe.single_phase = cfg.single_phase;
    pe.rp = 1.0 / (2.0 - cfg.p);
    const double rq_exp = 2.0 + cfg.k_alpha - q_eff;
    pe.rq_infinite = rq_exp <= 0.0;
    pe.rq = pe.rq_infinite ? 1e12 : 1.0 / rq_exp;

    std::vector<double> v;
    const std::vector<char> free_node =
        profile_free_mask(cfg.oracle_nodes, pe.theta, pe.rq_infinite && !cfg.single_phase, v);

    // projected gradient descent with backtracking over the free nodes
    std::vector<double> g(v.size()), trial(v.size());
    double fv = pe.value(v);
    double step = 1.0;
    for (int it = 0; it < 20000; ++it) {
        pe.gradient(v, g);
        double gmax = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (free_node[i]) gmax = std::max(gmax, std::abs(g[i]));
        if (gmax <= 1e-10 * std::max(1.0, fv)) break;
        step *= 1.5;
        while (true) {
            for (std::size_t i = 0; i < v.size(); ++i)
                trial[i] = free_node[i] ? v[i] - step * g[i] : v[i];
            const double ft = pe.value(trial);
            if (std::isfinite(ft) && ft <= fv) break;
            step *= 0.5;
            if (step < 1e-18) break;
        }
        if (step < 1e-18) break;
        v = trial;
        fv = pe.value(v);
    }

    if (pe.rq_infinite) {
        // report the true value: the penalized q-mass must be negligible
        ProfileEnergy true_pe = pe;
        true_pe.rq = 0.0;
        const double q_mass = (fv - true_pe.value(v)) / 1e12;
        if (q_mass > 1e-9 * std::max(1.0, true_pe.value(v)))
            throw config_error("competitor carries q-mass where the radial integral diverges");
        fv = true_pe.value(v);
    }
    if (profile_out) *profile_out = v;
    return fv;
}

GapReport gap_experiment(const GapConfig& cfg) {
    std::vector<double> profile;
    const double oracle = angular_oracle(cfg, &profile);
    const int n = int(profile.size());
    const double q_eff = cfg.single_phase ? cfg.p : cfg.q;

    auto profile_at = [&profile, n](double phi) {
        double fp = (phi + M_PI) / (2.0 * M_PI) * n;
        fp -= std::floor(fp / n) * n;
        const int j0 = std::min(int(fp), n - 1);
        const double t = fp - j0;
        return (1.0 - t) * profile[std::size_t(j0)] +
               t * profile[std::size_t((j0 + 1) % n)];
    };
    auto u0 = [&](const Point& x) {
        return profile_at(std::atan2(x[1], x[0]));
    };

    // competitor energy: angular segments x graded radial quadrature; also
    // validates finiteness near the origin
    const Weight w = cone_weight(cfg);
    double rp_num = 0.0, rq_num = 0.0;
    {
        const QuadratureRule rule = graded_quadrature_1d(0.0, 1.0, 0.0, 8);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double r = rule.nodes[i][0];
            rp_num += rule.weights[i] * std::pow(r, 1.0 - cfg.p);
            rq_num += rule.weights[i] * std::pow(r, 1.0 + cfg.k_alpha - q_eff);
        }
    }
    double competitor = 0.0;
    {
        const double dphi = 2.0 * M_PI / n;
        for (int j = 0; j < n; ++j) {
            const double dv = profile[std::size_t((j + 1) % n)] - profile[std::size_t(j)];
            const double slope = std::abs(dv) / dphi;
            if (slope <= 0.0) continue;
            competitor += rp_num * std::pow(slope, cfg.p) * dphi;
            if (!cfg.single_phase) {
                const double phi_mid = -M_PI + dphi * (j + 0.5);
                const double sb =
                    std::pow(std::sin(cone_angular_gap(phi_mid, cfg.cone_half_angle)),
                             cfg.k_alpha);
                // rq_num may be infinite; segments with sb = 0 carry no mass
                if (sb > 0.0) competitor += rq_num * sb * std::pow(slope, q_eff) * dphi;
            }
        }
    }
    if (!std::isfinite(competitor) || competitor > 1e100)
        throw config_error("competitor energy not finite at the configured quadrature");

    GapReport rep;
    rep.oracle_value = oracle;
    rep.competitor_energy = competitor;

    const EnergySpec spec =
        EnergySpec::make(cfg.p, q_eff, w, Domain::ball({0.0, 0.0}, 1.0, 2), 2);
    auto init = [&](const Point& x) {
        const double r = std::hypot(x[0], x[1]);
        return u0(x) * std::min(1.0, r / 0.25);
    };
    std::vector<double> prev_values;
    int prev_level = -1;
    for (int lvl : cfg.mesh_levels) {
        std::function<double(const Point&)> warm;
        if (!prev_values.empty()) {
            const int pnr = 6 << prev_level, pnphi = 12 << prev_level;
            warm = [values = prev_values, pnr, pnphi](const Point& x) {
                return polar_interp(values, pnr, pnphi, {0.0, 0.0}, 1.0, x);
            };
        }
        MinimizationResult res = minimize_discrete(spec, lvl, init, cfg.solver_tol,
                                                   cfg.solver_max_iters,
                                                   warm ? &warm : nullptr);
        prev_values = res.node_values;
        prev_level = lvl;
        rep.minima.push_back(res.energy);
    }

    const std::size_t m = rep.minima.size();
    rep.minima_stabilized =
        m >= 2 && std::abs(rep.minima[m - 1] - rep.minima[m - 2]) <=
                      cfg.stabilization * std::max(rep.minima[m - 1], 1e-30);
    double min_margin = kInf;
    for (double v : rep.minima)
        min_margin = std::min(min_margin, v / std::max(competitor, 1e-30) - 1.0);
    rep.margin = min_margin;

    if (rep.minima_stabilized && rep.margin >= cfg.margin_threshold)
        rep.verdict = GapVerdict::GapConsistent;
    else if (rep.minima_stabilized && rep.minima.back() <= competitor * (1.0 + cfg.stabilization))
        rep.verdict = GapVerdict::AbsenceConsistent;
    else
        rep.verdict = GapVerdict::Inconclusive;
    return rep;
}

} // namespace dphase
