#include "dphase/decomposition.hpp"

#include <cmath>

#include "dphase/parallel.hpp"

namespace dphase {

namespace {
constexpr double kZeroThreshold = 1e-300;
}

double sigma_at(const Weight& w, const Point& x) {
    const double ka = w.k + w.alpha;
    double s = 0.0;
    for (int i = 0; i <= w.k; ++i) {
        const double nd = derivative_norm(w, x, i);
        if (nd > 0.0) s += std::pow(nd, ka / (ka - i));
    }
    return s;
}

double omega_at(const Weight& w, const Point& x) {
    const double s = sigma_at(w, x);
    if (s < kZeroThreshold) return 1.0;
    const double o = w.value(x) / s;
    return o < 0.0 ? 0.0 : (o > 1.0 ? 1.0 : o);
}

DecompositionField decompose_on_grid(const Weight& w, const Domain& region, int resolution) {
    if (resolution < 2) throw parameter_error("decompose_on_grid needs resolution >= 2");
    if (!w.domain.contains_compactly(region))
        throw containment_error("region not compactly contained in the weight's domain");

    DecompositionField f;
    f.dim = w.dim;
    f.k = w.k;
    f.alpha = w.alpha;

    Point lo, hi;
    region.bounding_box(lo, hi);
    if (w.dim == 1) {
        f.grid.reserve(std::size_t(resolution));
        for (int i = 0; i < resolution; ++i)
            f.grid.push_back({lo[0] + (hi[0] - lo[0]) * i / (resolution - 1), 0.0});
    } else {
        f.grid.reserve(std::size_t(resolution) * std::size_t(resolution));
        for (int j = 0; j < resolution; ++j)
            for (int i = 0; i < resolution; ++i)
                f.grid.push_back({lo[0] + (hi[0] - lo[0]) * i / (resolution - 1),
                                  lo[1] + (hi[1] - lo[1]) * j / (resolution - 1)});
    }

    const std::size_t n = f.grid.size();
    f.a.resize(n);
    f.sigma.resize(n);
    f.omega.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const Point& x = f.grid[i];
        f.a[i] = w.value(x);
        f.sigma[i] = sigma_at(w, x);
        f.omega[i] = f.sigma[i] < kZeroThreshold ? 1.0 : f.a[i] / f.sigma[i];
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (f.omega[i] < 0.0 || f.omega[i] > 1.0 + 1e-12)
            throw hypothesis_error("omega left [0,1]; derivative oracle inconsistent");
        if (f.sigma[i] >= kZeroThreshold) {
            const double prod = f.sigma[i] * f.omega[i];
            const double scale = std::max(std::abs(f.a[i]), kZeroThreshold);
            if (std::abs(prod - f.a[i]) > 1e-12 * scale)
                throw hypothesis_error("sigma*omega drifted from a on the grid");
        }
    }
    return f;
}

} // namespace dphase
