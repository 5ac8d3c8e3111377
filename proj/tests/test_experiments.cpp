#include <doctest.h>

#include <cmath>

#include "dphase/experiments.hpp"

using namespace dphase;

TEST_CASE("harmonic extension of linear data is linear") {
    const EnergySpec spec = EnergySpec::make(
        2.0, 2.0, catalog_get("constant:0").weight, Domain::box(0.0, 1.0, 0.0, 1.0), 2);
    const MinimizationResult res =
        minimize_discrete(spec, 3, [](const Point& x) { return x[0]; }, 1e-9);
    CHECK(res.energy == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.residual <= 1e-9);
    CHECK(res.monotone);
    // the minimizer is u = x up to solver tolerance
    for (int j = 0; j < res.minimizer.ny; j += 8)
        for (int i = 0; i < res.minimizer.nx; i += 8)
            CHECK(res.minimizer.at(i, j) ==
                  doctest::Approx(res.minimizer.node(i, j)[0]).epsilon(1e-4));
}

TEST_CASE("equal exponents double the energy of the same minimizer") {
    const Domain box = Domain::box(0.0, 1.0, 0.0, 1.0);
    const EnergySpec s0 =
        EnergySpec::make(2.0, 2.0, catalog_get("constant:0").weight, box, 2);
    const EnergySpec s1 =
        EnergySpec::make(2.0, 2.0, catalog_get("constant:1").weight, box, 2);
    auto u0 = [](const Point& x) { return x[0]; };
    const double e0 = minimize_discrete(s0, 2, u0, 1e-9).energy;
    const double e1 = minimize_discrete(s1, 2, u0, 1e-9).energy;
    CHECK(e1 == doctest::Approx(2.0 * e0).epsilon(1e-6));
}

TEST_CASE("1D double phase minimizer beats the linear competitor") {
    const EnergySpec spec = EnergySpec::make(
        2.0, 4.0, catalog_get("power2n:1").weight, Domain::interval(0.0, 1.0), 3);
    const MinimizationResult res =
        minimize_discrete(spec, 4, [](const Point& x) { return x[0]; }, 1e-10);
    CHECK(res.energy <= 4.0 / 3.0 + 1e-9);
    CHECK(res.monotone);
    // two code paths, one number
    const EnergyValue again = energy(res.minimizer, spec);
    CHECK(res.energy == doctest::Approx(again.total).epsilon(1e-9));
}

TEST_CASE("discrete minima are nonincreasing under refinement") {
    const EnergySpec spec = EnergySpec::make(
        2.0, 4.0, catalog_get("power2n:1").weight, Domain::interval(0.0, 1.0), 3);
    double prev = 1e30;
    for (int level : {2, 3, 4}) {
        const double m =
            minimize_discrete(spec, level, [](const Point& x) { return x[0]; }, 1e-10)
                .energy;
        CHECK(m <= prev * (1.0 + 1e-6) + 1e-6);
        prev = m;
    }
}

TEST_CASE("boundary data must have finite energy") {
    // q-term of the steep datum stays finite, so this one must not throw
    const EnergySpec spec = EnergySpec::make(
        2.0, 4.0, catalog_get("power2n:1").weight, Domain::interval(0.0, 1.0), 3);
    CHECK_NOTHROW(minimize_discrete(spec, 2, [](const Point& x) { return 100.0 * x[0]; },
                                    1e-6, 2000));
}

TEST_CASE("absence experiment on the square weight") {
    const Domain omega = Domain::interval(0.0, 1.0);
    const StarShape star = StarShape::make(omega, {0.5, 0.0}, 0.45);
    const Weight w = catalog_get("power2n:1").weight;
    const GapReport rep = absence_experiment(w, 2.0, 4.0, {3, 4}, star, 0.02, 1e-10);
    CHECK(rep.verdict == GapVerdict::AbsenceConsistent);
    CHECK(rep.minima.size() == 2);
    CHECK(rep.minima[1] <= rep.minima[0] * (1.0 + 1e-6));

    // the gate refusal path
    CHECK_THROWS_AS(absence_experiment(w, 1.0, 4.0, {2, 3}, star), gate_refused);
}

TEST_CASE("angular oracle matches the closed form for in-cone transitions") {
    GapConfig cfg;
    cfg.p = 1.15;
    cfg.q = 4.0;
    cfg.k_alpha = 1.0;
    cfg.cone_half_angle = 0.35;
    cfg.oracle_nodes = 1024;
    const double oracle = angular_oracle(cfg);
    const double theta = cfg.cone_half_angle;
    const double closed = 4.0 * std::pow(theta, 1.0 - cfg.p) / (2.0 - cfg.p);
    CHECK(oracle == doctest::Approx(closed).epsilon(0.01));

    cfg.single_phase = true;
    const double oracle_sp = angular_oracle(cfg);
    CHECK(oracle_sp == doctest::Approx(closed).epsilon(0.01));
}

TEST_CASE("single-phase control is absence-consistent at desk scale") {
    GapConfig cfg;
    cfg.single_phase = true;
    cfg.p = 1.15;
    cfg.q = 4.0;
    cfg.mesh_levels = {0, 1};
    cfg.oracle_nodes = 512;
    cfg.solver_tol = 1e-6;
    cfg.solver_max_iters = 20000;
    const GapReport rep = gap_experiment(cfg);
    CHECK(rep.verdict != GapVerdict::GapConsistent);
    CHECK(rep.minima.size() == 2);
    CHECK(rep.minima[1] <= rep.competitor_energy * 1.05);
}
