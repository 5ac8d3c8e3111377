#include "dphase/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dphase {

EnergySpec EnergySpec::make(double p, double q, const Weight& w, const Domain& omega,
                            int quad_level) {
    if (!(1.0 <= p && p <= q) || !std::isfinite(q))
        throw parameter_error("energy needs 1 <= p <= q < inf");
    EnergySpec spec;
    spec.p = p;
    spec.q = q;
    spec.weight = w;
    spec.omega = omega;
    spec.quad_level = std::max(0, quad_level);
    return spec;
}

// Integral of the weight over [a, b] by Gauss-2 panels.
double cell_weight_integral_1d(const Weight& w, double a, double b, int level) {
    const int panels = 1 << std::min(level, 8);
    const double off = 0.5 / std::sqrt(3.0);
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + (b - a) * i / panels, pb = a + (b - a) * (i + 1) / panels;
        const double m = 0.5 * (pa + pb), h = pb - pa;
        sum += 0.5 * h * (w.value({m - h * off, 0.0}) + w.value({m + h * off, 0.0}));
    }
    return sum;
}

// Average of the weight over a triangle by subdivided centroid rule.
double cell_weight_average_tri(const Weight& w, const Point& v0, const Point& v1,
                               const Point& v2, int level) {
    const int n = 1 << std::min(level, 4); // n^2 subtriangle grid per edge
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + i < n; ++j) {
            // two barycentric centroids per lattice cell of the subdivision
            for (int t = 0; t < 2; ++t) {
                if (t == 1 && j + i == n - 1) break;
                const double b0 = (i + (t == 0 ? 1.0 : 2.0) / 3.0) / n;
                const double b1 = (j + (t == 0 ? 1.0 : 2.0) / 3.0) / n;
                const double b2 = 1.0 - b0 - b1;
                const Point x{v0[0] * b2 + v1[0] * b0 + v2[0] * b1,
                              v0[1] * b2 + v1[1] * b0 + v2[1] * b1};
                sum += w.value(x);
                ++count;
            }
        }
    return count > 0 ? sum / count : w.value(v0);
}

namespace {

struct CellData {
    double volume = 0.0;
    double grad_norm = 0.0;
    double a_integral = 0.0; // integral of the weight over the cell
};

// Shared discretization: 1D interval cells with exact slopes, 2D lattice
// cells split into two triangles with constant gradients.
std::vector<CellData> build_cells(const ScalarField& u, const EnergySpec& spec) {
    std::vector<CellData> cells;
    if (u.dim() == 1) {
        cells.reserve(std::size_t(u.nx - 1));
        const double h = u.dx();
        for (int i = 0; i + 1 < u.nx; ++i) {
            CellData c;
            c.volume = h;
            c.grad_norm = std::abs(u.at(i + 1) - u.at(i)) / h;
            c.a_integral =
                cell_weight_integral_1d(spec.weight, u.node(i)[0], u.node(i + 1)[0], spec.quad_level);
            cells.push_back(c);
        }
        return cells;
    }
    const double hx = u.dx(), hy = u.dy();
    cells.reserve(std::size_t(u.nx - 1) * std::size_t(u.ny - 1) * 2);
    for (int j = 0; j + 1 < u.ny; ++j)
        for (int i = 0; i + 1 < u.nx; ++i) {
            const Point p00 = u.node(i, j), p10 = u.node(i + 1, j);
            const Point p01 = u.node(i, j + 1), p11 = u.node(i + 1, j + 1);
            const double u00 = u.at(i, j), u10 = u.at(i + 1, j);
            const double u01 = u.at(i, j + 1), u11 = u.at(i + 1, j + 1);
            // lower triangle (p00, p10, p11), upper triangle (p00, p11, p01)
            {
                CellData c;
                c.volume = 0.5 * hx * hy;
                const double gx = (u10 - u00) / hx, gy = (u11 - u10) / hy;
                c.grad_norm = std::hypot(gx, gy);
                c.a_integral =
                    c.volume * cell_weight_average_tri(spec.weight, p00, p10, p11, spec.quad_level);
                cells.push_back(c);
            }
            {
                CellData c;
                c.volume = 0.5 * hx * hy;
                const double gx = (u11 - u01) / hx, gy = (u01 - u00) / hy;
                c.grad_norm = std::hypot(gx, gy);
                c.a_integral =
                    c.volume * cell_weight_average_tri(spec.weight, p00, p11, p01, spec.quad_level);
                cells.push_back(c);
            }
        }
    return cells;
}

} // namespace

EnergyValue energy(const ScalarField& u, const EnergySpec& spec) {
    EnergyValue out;
    for (const CellData& c : build_cells(u, spec)) {
        out.p_term += c.volume * std::pow(c.grad_norm, spec.p);
        out.q_term += c.a_integral * std::pow(c.grad_norm, spec.q);
    }
    out.total = out.p_term + out.q_term;
    return out;
}

std::vector<double> energy_cell_masses(const ScalarField& u, const EnergySpec& spec) {
    std::vector<double> masses;
    for (const CellData& c : build_cells(u, spec))
        masses.push_back(c.volume * std::pow(c.grad_norm, spec.p) +
                         c.a_integral * std::pow(c.grad_norm, spec.q));
    return masses;
}

double luxembourg_norm(const ScalarField& u, const EnergySpec& spec, double tol) {
    if (!(tol > 0.0)) throw parameter_error("luxembourg_norm needs tol > 0");
    const EnergyValue e = energy(u, spec);
    if (e.total <= 0.0) return 0.0;
    auto modular = [&](double s) {
        return e.p_term * std::pow(s, -spec.p) + e.q_term * std::pow(s, -spec.q);
    };
    double lo = 1.0, hi = 1.0;
    while (modular(hi) > 1.0 && hi < 1e100) hi *= 2.0;
    while (modular(lo) <= 1.0 && lo > 1e-100) lo *= 0.5;
    for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (modular(mid) <= 1.0 ? hi : lo) = mid;
    }
    return hi;
}

ScalarField truncate(const ScalarField& u, double M) {
    if (!(M > 0.0)) throw parameter_error("truncate needs M > 0");
    ScalarField out = u;
    for (double& v : out.values) v = std::clamp(v, -M, M);
    return out;
}

double top_fraction_share(const std::vector<double>& cell_masses, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw parameter_error("fraction must lie in (0, 1]");
    std::vector<double> sorted = cell_masses;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    if (total <= 0.0) return 0.0;
    const std::size_t k =
        std::max<std::size_t>(1, std::size_t(std::llround(fraction * double(sorted.size()))));
    const double top =
        std::accumulate(sorted.begin(), sorted.begin() + std::min(k, sorted.size()), 0.0);
    return top / total;
}

double equiintegrability_index(const std::vector<std::vector<double>>& cell_masses,
                               double fraction) {
    if (cell_masses.size() < 2)
        throw parameter_error("equiintegrability_index needs >= 2 fields");
    double worst = 0.0;
    for (const auto& masses : cell_masses)
        worst = std::max(worst, top_fraction_share(masses, fraction));
    return worst;
}

namespace {

double percentile_999(const std::vector<double>& values) {
    std::vector<double> mags;
    mags.reserve(values.size());
    for (double v : values) mags.push_back(std::abs(v));
    std::sort(mags.begin(), mags.end());
    const std::size_t idx =
        std::min(mags.size() - 1, std::size_t(std::ceil(0.999 * double(mags.size()))) - 1);
    return mags[idx];
}

} // namespace

ApproximationTrace approximate(const ScalarField& u, const EnergySpec& spec,
                               const StarShape& star, const std::vector<double>& schedule,
                               ApproxMode mode, std::optional<double> gamma) {
    const double kappa = spec.weight.k + spec.weight.alpha;
    if (mode == ApproxMode::CaseI) {
        const double rhs = spec.p + kappa * std::max(1.0, spec.p / spec.weight.dim);
        if (!(spec.q <= rhs + 1e-12)) {
            std::ostringstream msg;
            msg << "gate refused: q <= p + kappa*max(1, p/N) is " << spec.q << " <= " << rhs
                << ", false";
            throw gate_refused(msg.str());
        }
    } else {
        if (!gamma || !(*gamma > 0.0) || !(*gamma < 1.0))
            throw gate_refused("gate refused: the Hoelder mode needs gamma strictly inside (0, 1)");
        const double rhs = spec.p + kappa / (1.0 - *gamma);
        if (!(spec.q <= rhs + 1e-12)) {
            std::ostringstream msg;
            msg << "gate refused: q <= p + kappa/(1-gamma) is " << spec.q << " <= " << rhs
                << ", false";
            throw gate_refused(msg.str());
        }
    }
    if (schedule.empty()) throw parameter_error("empty delta schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw parameter_error("delta schedule must be strictly decreasing");

    ApproximationTrace trace;
    trace.mode = mode;
    trace.gamma = gamma;
    trace.energy_u = energy(u, spec).total;
    trace.truncation_level = std::max(percentile_999(u.values), 1e-30);

    const ScalarField clipped = truncate(u, trace.truncation_level);
    const auto grads_u = gradient_fields(u);

    std::vector<std::vector<double>> masses;
    for (double d : schedule) {
        const MollifierConfig cfg = MollifierConfig::make(star, d);
        const ScalarField ud = mollify_field(cfg, clipped);
        const EnergyValue e = energy(ud, spec);
        if (!std::isfinite(e.total)) throw config_error("non-finite energy along the schedule");
        trace.deltas.push_back(d);
        trace.energies.push_back(e.total);
        trace.p_terms.push_back(e.p_term);
        trace.q_terms.push_back(e.q_term);

        // W^{1,1} distance to the input on the shared lattice
        ScalarField diff = ud;
        for (std::size_t i = 0; i < diff.values.size(); ++i)
            diff.values[i] -= u.values[i];
        const auto grads_d = gradient_fields(ud);
        ScalarField gdiff = grads_d[0];
        for (std::size_t i = 0; i < gdiff.values.size(); ++i)
            gdiff.values[i] -= grads_u[0].values[i];
        double w11 = diff.l1_norm() + gdiff.l1_norm();
        if (u.dim() == 2) {
            ScalarField gdiff2 = grads_d[1];
            for (std::size_t i = 0; i < gdiff2.values.size(); ++i)
                gdiff2.values[i] -= grads_u[1].values[i];
            w11 += gdiff2.l1_norm();
        }
        trace.w11_errors.push_back(w11);
        masses.push_back(energy_cell_masses(ud, spec));
    }
    for (const auto& m : masses) trace.equi_indices.push_back(top_fraction_share(m, 1e-3));
    return trace;
}

} // namespace dphase
