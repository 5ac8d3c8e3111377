#include <doctest.h>

#include <cmath>

#include "dphase/energy.hpp"
#include "dphase/rng.hpp"

using namespace dphase;

namespace {

EnergySpec linear_spec(double p, double q, const std::string& weight, const Domain& omega) {
    return EnergySpec::make(p, q, catalog_get(weight).weight, omega, 3);
}

} // namespace

TEST_CASE("energy of closed-form fields") {
    const Domain unit = Domain::interval(0.0, 1.0);

    SUBCASE("linear field with unit weight") {
        const EnergySpec spec = linear_spec(2.0, 3.0, "constant:1", unit);
        const ScalarField u =
            ScalarField::sample(unit, 257, 1, [](const Point& x) { return x[0]; });
        const EnergyValue e = energy(u, spec);
        CHECK(e.total == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(e.p_term == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("zero field") {
        const EnergySpec spec = linear_spec(2.0, 3.0, "constant:1", unit);
        ScalarField u = ScalarField::lattice(unit, 65);
        CHECK(energy(u, spec).total == 0.0);
    }

    SUBCASE("quadratic field against the square weight") {
        const EnergySpec spec = linear_spec(2.0, 4.0, "power2n:1", unit);
        const ScalarField u =
            ScalarField::sample(unit, 65537, 1, [](const Point& x) { return x[0] * x[0]; });
        const EnergyValue e = energy(u, spec);
        // int 4x^2 + x^2 (2x)^4 dx = 4/3 + 16/7
        CHECK(e.p_term == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
        CHECK(e.q_term == doctest::Approx(16.0 / 7.0).epsilon(1e-8));
    }
}

TEST_CASE("energy is convex in the field") {
    const Domain unit = Domain::interval(0.0, 1.0);
    const EnergySpec spec = linear_spec(2.0, 4.0, "power2n:1", unit);
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField u = ScalarField::lattice(unit, 129), w = u;
        for (int i = 0; i < u.nx; ++i) {
            u.at(i) = rng.uniform(-1.0, 1.0);
            w.at(i) = rng.uniform(-1.0, 1.0);
        }
        const double th = rng.uniform(0.0, 1.0);
        ScalarField mix = u;
        for (int i = 0; i < u.nx; ++i) mix.at(i) = th * u.at(i) + (1.0 - th) * w.at(i);
        CHECK(energy(mix, spec).total <=
              th * energy(u, spec).total + (1.0 - th) * energy(w, spec).total + 1e-9);
    }
}

TEST_CASE("Luxembourg gauge") {
    const Domain unit = Domain::interval(0.0, 1.0);
    const EnergySpec spec = linear_spec(2.0, 2.0, "constant:0", unit);
    const ScalarField u =
        ScalarField::sample(unit, 257, 1, [](const Point& x) { return x[0]; });

    SUBCASE("pure L2 case is the square root of the Dirichlet energy") {
        CHECK(luxembourg_norm(u, spec, 1e-10) == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("zero fields have zero norm") {
        ScalarField z = ScalarField::lattice(unit, 65);
        CHECK(luxembourg_norm(z, spec, 1e-10) == 0.0);
    }
    SUBCASE("homogeneous modulars scale linearly") {
        ScalarField two = u;
        for (double& v : two.values) v *= 2.0;
        CHECK(luxembourg_norm(two, spec, 1e-10) ==
              doctest::Approx(2.0 * luxembourg_norm(u, spec, 1e-10)).epsilon(1e-8));
    }
    SUBCASE("modular duality at the gauge") {
        const EnergySpec dp = linear_spec(2.0, 4.0, "power2n:1", unit);
        const double s = luxembourg_norm(u, dp, 1e-10);
        const EnergyValue e = energy(u, dp);
        const double modular =
            e.p_term * std::pow(s, -dp.p) + e.q_term * std::pow(s, -dp.q);
        CHECK(modular == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("truncation") {
    const Domain unit = Domain::interval(0.0, 1.0);
    const ScalarField u =
        ScalarField::sample(unit, 257, 1, [](const Point& x) { return 2.0 * x[0]; });

    SUBCASE("bounded fields pass through") {
        const ScalarField t = truncate(u, 5.0);
        for (std::size_t i = 0; i < u.values.size(); ++i)
            CHECK(t.values[i] == u.values[i]);
    }
    SUBCASE("clamped slopes halve the total variation") {
        const EnergySpec spec = linear_spec(1.0, 1.0, "constant:0", unit);
        const ScalarField t = truncate(u, 1.0);
        CHECK(energy(t, spec).p_term == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(energy(u, spec).p_term == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("truncation never increases the energy") {
        const EnergySpec spec = linear_spec(2.0, 4.0, "power2n:1", unit);
        Rng rng(8);
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField v = ScalarField::lattice(unit, 129);
            for (int i = 0; i < v.nx; ++i) v.at(i) = rng.uniform(-2.0, 2.0);
            const double m = rng.uniform(0.1, 1.5);
            CHECK(energy(truncate(v, m), spec).total <= energy(v, spec).total + 1e-9);
        }
    }
    SUBCASE("vanishing truncation level kills the energy") {
        const EnergySpec spec = linear_spec(2.0, 4.0, "power2n:1", unit);
        CHECK(energy(truncate(u, 1e-9), spec).total <= 1e-10);
    }
}

TEST_CASE("equiintegrability index") {
    SUBCASE("uniform masses return the fraction") {
        std::vector<double> uniform(1000, 1.0);
        CHECK(equiintegrability_index({uniform, uniform}, 0.1) ==
              doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("a mass-half spike never averages out") {
        std::vector<double> spike(1000, 0.5 / 999.0);
        spike[0] = 0.5;
        for (double f : {0.1, 0.01, 0.001})
            CHECK(equiintegrability_index({spike, spike}, f) >= 0.5 - 1e-12);
    }
}

TEST_CASE("approximation pipeline") {
    const Domain omega = Domain::interval(-1.0, 1.0);
    const StarShape star = StarShape::make(omega, {0.0, 0.0}, 0.9);
    const EnergySpec spec = linear_spec(2.0, 4.0, "power2n:1", omega);
    const ScalarField u = ScalarField::sample(omega, 4097, 1, [](const Point& x) {
        return std::max(0.0, 1.0 - std::abs(x[0]));
    });

    SUBCASE("energies converge within 2% and W11 errors decrease") {
        const ApproximationTrace tr =
            approximate(u, spec, star, {0.05, 0.01, 0.001}, ApproxMode::CaseI, std::nullopt);
        REQUIRE(tr.energies.size() == 3);
        CHECK(std::abs(tr.energies.back() - tr.energy_u) <= 0.02 * tr.energy_u);
        CHECK(tr.w11_errors[1] < tr.w11_errors[0]);
        CHECK(tr.w11_errors[2] < tr.w11_errors[1]);
        CHECK(tr.equi_indices.back() < 0.05);
    }

    SUBCASE("gate refusal spells out the failing inequality") {
        const EnergySpec bad = linear_spec(1.0, 4.0, "power2n:1", omega);
        try {
            approximate(u, bad, star, {0.05}, ApproxMode::CaseI, std::nullopt);
            FAIL("expected gate_refused");
        } catch (const gate_refused& e) {
            const std::string msg = e.what();
            CHECK(msg.find("4") != std::string::npos);
            CHECK(msg.find("3") != std::string::npos);
            CHECK(msg.find("false") != std::string::npos);
        }
    }

    SUBCASE("Hoelder mode admits the widened gate") {
        // q <= p + kappa/(1-gamma): kappa=2, gamma=1/2 admits q=5, p=1
        const EnergySpec wide = linear_spec(1.0, 5.0, "power2n:1", omega);
        const ApproximationTrace tr =
            approximate(u, wide, star, {0.05, 0.02}, ApproxMode::CaseII, 0.5);
        CHECK(tr.energies.size() == 2);
        CHECK(std::isfinite(tr.energies.back()));
        // gamma = 1 is not defined and must be refused
        CHECK_THROWS_AS(approximate(u, wide, star, {0.05}, ApproxMode::CaseII, 1.0),
                        gate_refused);
    }

    SUBCASE("schedules must decrease strictly") {
        CHECK_THROWS_AS(
            approximate(u, spec, star, {0.05, 0.05}, ApproxMode::CaseI, std::nullopt),
            parameter_error);
    }
}
