#include <doctest.h>

#include <cmath>

#include "dphase/classifiers.hpp"
#include "dphase/rng.hpp"

using namespace dphase;

namespace {

FieldOracle oracle_1d(std::function<double(double)> f) {
    return {1, [f](const Point& p) { return f(p[0]); }};
}

const Domain omega = Domain::interval(-1.0, 1.0);
const Domain outer = Domain::interval(-2.0, 2.0);

} // namespace

TEST_CASE("decay-class estimates on closed forms") {
    SUBCASE("constants are bounded with constant at most one") {
        const auto rep = z_constant(oracle_1d([](double) { return 1.0; }), 2.0, omega, 2, 1);
        CHECK(rep.verdict == Verdict::Bounded);
        CHECK(rep.estimates.back().second <= 1.0 + 1e-12);
    }
    SUBCASE("|t| with kappa=1 obeys the triangle inequality") {
        const auto rep =
            z_constant(oracle_1d([](double t) { return std::abs(t); }), 1.0, omega, 2, 1);
        CHECK(rep.verdict == Verdict::Bounded);
        CHECK(rep.estimates.back().second <= 1.0 + 1e-9);
    }
    SUBCASE("t^2 at its own decay rate stabilizes at 2") {
        const auto rep =
            z_constant(oracle_1d([](double t) { return t * t; }), 2.0, omega, 3, 1);
        CHECK(rep.verdict == Verdict::Bounded);
        CHECK(rep.estimates.back().second == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("t^2 beyond its decay rate diverges") {
        const auto rep =
            z_constant(oracle_1d([](double t) { return t * t; }), 2.5, omega, 3, 1);
        CHECK(rep.verdict == Verdict::Diverging);
    }
    SUBCASE("the flat exponential lies in every decay class") {
        const auto rep = z_constant(weight_oracle(catalog_get("gauss_flat").weight), 3.0,
                                    omega, 3, 1);
        CHECK(rep.verdict == Verdict::Bounded);
    }
    CHECK_THROWS_AS(z_constant(oracle_1d([](double) { return 1.0; }), -1.0, omega, 2, 1),
                    parameter_error);
}

TEST_CASE("Muckenhoupt estimates on closed forms") {
    SUBCASE("constants give exactly one") {
        const auto rep = muckenhoupt_constant(oracle_1d([](double) { return 2.0; }), 3.0,
                                              omega, outer, 2, 1);
        CHECK(rep.verdict == Verdict::Bounded);
        CHECK(rep.estimates.back().second == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("|t| at r=3 gives two on centered balls") {
        const FieldOracle f = oracle_1d([](double t) { return std::abs(t); });
        // closed form on (-h, h): (h/2) * (2/sqrt(h))^2 = 2 at every radius
        for (double h : {0.5, 0.1, 0.01})
            CHECK(muckenhoupt_ball_quotient(f, Ball{{0.0, 0.0}, h, 1}, 3.0, 6) ==
                  doctest::Approx(2.0).epsilon(0.01));
        // the sup over off-center balls is a bit larger but stays bounded
        const auto rep = muckenhoupt_constant(f, 3.0, omega, outer, 2, 1);
        CHECK(rep.verdict == Verdict::Bounded);
        CHECK(rep.estimates.back().second >= 2.0);
        CHECK(rep.estimates.back().second <= 3.5);
    }
    SUBCASE("t^2 splits at the integrability threshold r = 3") {
        const auto diverging = muckenhoupt_constant(
            oracle_1d([](double t) { return t * t; }), 2.9, omega, outer, 3, 1);
        CHECK(diverging.verdict == Verdict::Diverging);
        const auto bounded = muckenhoupt_constant(
            oracle_1d([](double t) { return t * t; }), 3.5, omega, outer, 3, 1);
        CHECK(bounded.verdict == Verdict::Bounded);
    }
    SUBCASE("the oscillating factor t^2 sin^2(1/t) is A_4") {
        const auto rep = muckenhoupt_constant(
            weight_oracle(catalog_get("sin6_omega_part").weight), 4.0,
            Domain::interval(-0.5, 0.5), omega, 3, 1);
        CHECK(rep.verdict == Verdict::Bounded);
    }
    CHECK_THROWS_AS(muckenhoupt_constant(oracle_1d([](double) { return 1.0; }), 1.0, omega,
                                         outer, 2, 1),
                    parameter_error);
}

TEST_CASE("2D estimators handle the ball indicator") {
    const Domain inner2 = Domain::box(-1.0, 1.0, -1.0, 1.0);
    const Domain outer2 = Domain::box(-2.0, 2.0, -2.0, 2.0);
    const FieldOracle constant{2, [](const Point&) { return 3.0; }};
    const auto rep = muckenhoupt_constant(constant, 3.0, inner2, outer2, 2, 1);
    CHECK(rep.verdict == Verdict::Bounded);
    CHECK(rep.estimates.back().second == doctest::Approx(1.0).epsilon(1e-6));

    const FieldOracle radial{2, [](const Point& p) { return std::hypot(p[0], p[1]); }};
    const auto zrep = z_constant(radial, 1.0, inner2, 2, 1);
    CHECK(zrep.verdict == Verdict::Bounded);
    CHECK(zrep.estimates.back().second <= 1.0 + 1e-9); // triangle inequality
}

TEST_CASE("global variant clips the averages to the region") {
    const Domain region = Domain::interval(0.0, 1.0);
    SUBCASE("constants") {
        const auto rep =
            global_muckenhoupt_constant(oracle_1d([](double) { return 1.0; }), 3.0, region, 2, 1);
        CHECK(rep.verdict == Verdict::Bounded);
        CHECK(rep.estimates.back().second == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("t on (0,1) at r=3 is bounded") {
        const auto rep =
            global_muckenhoupt_constant(oracle_1d([](double t) { return t; }), 3.0, region, 2, 1);
        CHECK(rep.verdict == Verdict::Bounded);
    }
    SUBCASE("the flat exponential diverges globally") {
        const auto rep = global_muckenhoupt_constant(
            weight_oracle(catalog_get("gauss_flat").weight), 4.0, region, 3, 1);
        CHECK(rep.verdict == Verdict::Diverging);
    }
}

TEST_CASE("estimates are nondecreasing and witnesses reproducible") {
    const auto rep =
        z_constant(oracle_1d([](double t) { return t * t; }), 2.0, omega, 3, 17);
    for (std::size_t i = 1; i < rep.estimates.size(); ++i)
        CHECK(rep.estimates[i].second >= rep.estimates[i - 1].second);
    const auto rep2 =
        z_constant(oracle_1d([](double t) { return t * t; }), 2.0, omega, 3, 17);
    CHECK(rep.witness.x[0] == rep2.witness.x[0]);
    CHECK(rep.witness.y[0] == rep2.witness.y[0]);
    CHECK(rep.witness.value == rep2.witness.value);

    const auto mrep = muckenhoupt_constant(oracle_1d([](double t) { return std::abs(t); }),
                                           3.0, omega, outer, 2, 23);
    const auto mrep2 = muckenhoupt_constant(oracle_1d([](double t) { return std::abs(t); }),
                                            3.0, omega, outer, 2, 23);
    CHECK(mrep.witness.ball.center[0] == mrep2.witness.ball.center[0]);
    CHECK(mrep.witness.ball.radius == mrep2.witness.ball.radius);
}

TEST_CASE("scaling behavior of the estimators") {
    const Weight absw = catalog_get("abs_power:1").weight; // |t|
    const Weight scaled = scale_weight(absw, 3.0);

    const auto m1 = muckenhoupt_constant(weight_oracle(absw), 3.0, omega, outer, 2, 5);
    const auto m3 = muckenhoupt_constant(weight_oracle(scaled), 3.0, omega, outer, 2, 5);
    CHECK(m3.estimates.back().second ==
          doctest::Approx(m1.estimates.back().second).epsilon(1e-10));

    const auto z1 = z_constant(weight_oracle(absw), 1.0, omega, 2, 5);
    const auto z3 = z_constant(weight_oracle(scaled), 1.0, omega, 2, 5);
    CHECK(z3.estimates.back().second <= 3.0 * z1.estimates.back().second * (1.0 + 1e-10));
    CHECK(z3.estimates.back().second >= z1.estimates.back().second / 3.0 * (1.0 - 1e-10));
}

TEST_CASE("per-ball quotients are monotone in the index") {
    const FieldOracle f = oracle_1d([](double t) { return std::abs(t); });
    const auto balls =
        sample_balls(outer, omega, 50, BallSampleMode::ContainedInOuter, 31);
    for (const Ball& b : balls) {
        const double lo = muckenhoupt_ball_quotient(f, b, 3.5, 5);
        const double hi = muckenhoupt_ball_quotient(f, b, 3.0, 5);
        CHECK(lo <= hi * (1.0 + 1e-10) + 1e-10);
    }
}

TEST_CASE("classification composes the gate with both factor checks") {
    const Weight w = catalog_get("power2n:1").weight;
    SUBCASE("admissible exponents") {
        const ClassifyReport rep = classify_weight(w, 2.0, 4.0, omega, outer, 3, 9);
        CHECK(rep.gate);
        CHECK(rep.gate_rhs == doctest::Approx(6.0));
        CHECK(rep.sigma_z.verdict == Verdict::Bounded);
        CHECK(rep.omega_a.verdict == Verdict::Bounded);
        CHECK(rep.overall == Verdict::Bounded);
    }
    SUBCASE("inadmissible exponents fail the gate") {
        const ClassifyReport rep = classify_weight(w, 1.0, 4.0, omega, outer, 2, 9);
        CHECK(!rep.gate);
        CHECK(rep.gate_rhs == doctest::Approx(3.0));
    }
}
