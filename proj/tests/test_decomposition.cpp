#include <doctest.h>

#include <cmath>

#include "dphase/decomposition.hpp"

using namespace dphase;

TEST_CASE("sigma and omega at closed-form points") {
    const Weight w = catalog_get("power2n:1").weight; // t^2 with k=1, alpha=1
    CHECK(sigma_at(w, {0.5, 0.0}) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(omega_at(w, {0.5, 0.0}) == doctest::Approx(0.2).epsilon(1e-14));

    const Weight gf = catalog_get("gauss_flat").weight;
    CHECK(sigma_at(gf, {0.0, 0.0}) == 0.0);
    CHECK(omega_at(gf, {0.0, 0.0}) == 1.0);

    const Weight c = catalog_get("constant:2.5").weight;
    CHECK(sigma_at(c, {0.3, 0.0}) == doctest::Approx(2.5));
    CHECK(omega_at(c, {0.3, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("grid factorization on catalog weights") {
    const Domain region = Domain::interval(-1.0, 1.0);

    SUBCASE("square weight has constant omega away from zero") {
        const auto f = decompose_on_grid(catalog_get("power2n:1").weight, region, 1001);
        for (std::size_t i = 0; i < f.grid.size(); ++i)
            if (f.grid[i][0] != 0.0)
                CHECK(f.omega[i] == doctest::Approx(0.2).epsilon(1e-12));
    }

    SUBCASE("oscillating weight factors exactly") {
        const auto f = decompose_on_grid(catalog_get("sin6").weight,
                                         Domain::interval(-0.5, 0.5), 1001);
        for (std::size_t i = 0; i < f.grid.size(); ++i) {
            if (f.sigma[i] > 0.0)
                CHECK(f.sigma[i] * f.omega[i] ==
                      doctest::Approx(f.a[i]).epsilon(1e-12));
            CHECK(f.omega[i] >= 0.0);
            CHECK(f.omega[i] <= 1.0);
        }
    }

    SUBCASE("flat weight pins omega to one at the flat point") {
        const auto f = decompose_on_grid(catalog_get("gauss_flat").weight,
                                         Domain::interval(-0.5, 0.5), 1001);
        bool saw_zero = false;
        for (std::size_t i = 0; i < f.grid.size(); ++i)
            if (f.grid[i][0] == 0.0) {
                saw_zero = true;
                CHECK(f.omega[i] == 1.0);
            }
        CHECK(saw_zero);
    }
}

TEST_CASE("sigma is capped by the sum of powered max derivative norms") {
    const Weight w = catalog_get("sin6").weight;
    const Domain region = Domain::interval(-0.5, 0.5);
    const auto f = decompose_on_grid(w, region, 501);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (const Point& x : f.grid) {
        m0 = std::max(m0, derivative_norm(w, x, 0));
        m1 = std::max(m1, derivative_norm(w, x, 1));
        m2 = std::max(m2, derivative_norm(w, x, 2));
    }
    const double cap = m0 + std::pow(m1, 3.0 / 2.0) + std::pow(m2, 3.0);
    for (double s : f.sigma) CHECK(s <= cap * (1.0 + 1e-12));
}

TEST_CASE("weaker smoothness parameters still factor validly") {
    const Weight w = catalog_get("power2n:1").weight; // C^{1,1}
    const Weight weaker = with_smoothness(w, 0, 1.0); // view as C^{0,1}
    const auto f = decompose_on_grid(weaker, Domain::interval(-1.0, 1.0), 501);
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        CHECK(f.omega[i] >= 0.0);
        CHECK(f.omega[i] <= 1.0);
        if (f.sigma[i] > 0.0)
            CHECK(f.sigma[i] * f.omega[i] == doctest::Approx(f.a[i]).epsilon(1e-12));
        // k=0: sigma degenerates to the weight itself
        CHECK(f.sigma[i] == doctest::Approx(f.a[i]).epsilon(1e-14));
    }
}

TEST_CASE("region must sit compactly inside the weight's domain") {
    const Weight w = catalog_get("power2n:1").weight; // defined on (-4, 4)
    CHECK_THROWS_AS(decompose_on_grid(w, Domain::interval(-4.0, 4.0), 101),
                    containment_error);
}
