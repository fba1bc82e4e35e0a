#include "saddlenode/models.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace saddlenode;

TEST_CASE("hunting equation invariants") {
    // x = 0 solves the equation for every lambda, with fx(t,0) = -1/3
    const ScalarField f = hunting_predation_field(0.35);
    for (double t : {-5.0, 0.0, 4.0, 9.3, 20.0}) {
        CHECK(f.f(t, 0.0) == 0.0);
        CHECK(f.fx(t, 0.0) == Catch::Approx(-1.0 / 3.0).margin(1e-15));
    }
    // at lambda = 0 the predation term is off and x = 2 is an equilibrium
    const ScalarField f0 = hunting_predation_field(0.0);
    for (double t : {-5.0, 0.0, 4.0, 9.3, 20.0}) CHECK(f0.f(t, 2.0) == 0.0);
}

TEST_CASE("population coefficients at time zero") {
    const HollingCoefficients c = holling_quasiperiodic_coefficients();
    CHECK(c.r(0.0) == Catch::Approx(0.95).margin(1e-14));
    CHECK(c.K(0.0) == Catch::Approx(30.8).margin(1e-13));
    CHECK(c.Gamma(0.0) == Catch::Approx(-160.0).margin(1e-12));
    CHECK(c.b(0.0) == Catch::Approx(426.0).margin(1e-12));
    CHECK(c.a == -3.0);

    const HollingCoefficients boosted = holling_boosted_coefficients();
    CHECK(boosted.Gamma(0.0) == Catch::Approx(-480.0).margin(1e-11));
    CHECK(boosted.Gamma(50.0) == Catch::Approx(c.Gamma(50.0)).margin(1e-11));
}

TEST_CASE("circuit reduction constants") {
    const CircuitParams params = circuit_default_params();
    const ScalarField f = circuit_field(params, constant(0.0), -0.5);
    // rho = alpha - 1/R - 3 beta V0^2 = 19/3 - 1 - 1/3 = 5, read off at Q = 0
    CHECK(f.fx(0.3, 0.0) == Catch::Approx(5.0).margin(1e-12));
    CHECK(f.f(0.0, 0.0) == Catch::Approx(-0.5 + params.E0(0.0)).margin(1e-12));
}

TEST_CASE("circuit field equals the direct Kirchhoff evaluation") {
    const CircuitParams params = circuit_default_params();
    const TimeSignal p = constant(0.0);
    const ScalarField f = circuit_field(params, p, -0.5);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ut(-20, 20), uq(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const double t = ut(rng), q = uq(rng);
        CHECK(f.f(t, q) ==
              Catch::Approx(circuit_kirchhoff_rhs(params, p, -0.5, t, q)).margin(1e-11));
    }
}

TEST_CASE("circuit rejects invalid parameters") {
    CircuitParams params = circuit_default_params();
    params.I0 = 1.0;  // violates f(0) = 0
    CHECK_THROWS_AS(circuit_field(params, constant(0.0), 0.0), std::invalid_argument);

    CircuitParams squeezed = circuit_default_params();
    squeezed.A = 1.5;  // C = C0 + A p can cross zero
    CHECK_THROWS_AS(circuit_field(squeezed, plateau_hat(4.0), 0.0), std::invalid_argument);
}

TEST_CASE("population model rejects invalid coefficients") {
    HollingCoefficients c = holling_quasiperiodic_coefficients();
    c.K = harmonic(1.0, 1.0, 0, Waveform::sine);  // not positively bounded below
    CHECK_THROWS_AS(holling_field(c, constant(0.0), 0.1), std::invalid_argument);
}

TEST_CASE("analytic derivatives match finite differences everywhere") {
    const auto check = [](const ScalarField& f, double x_lo, double x_hi) {
        const auto rep = check_derivatives(f, -12, 12, x_lo, x_hi, 300, 5);
        CAPTURE(f.name, rep.worst_rel_err, rep.at_t, rep.at_x);
        CHECK(rep.pass);
    };
    check(hunting_concave_field(0.2), -3, 3);
    check(hunting_dconcave_field(0.05), -1, 3);
    check(hunting_predation_field(0.35), -1, 3);
    check(holling_field(holling_quasiperiodic_coefficients(), plateau_hat(1.0), 0.12), 0.5, 35);
    check(holling_field(holling_boosted_coefficients(), slow_blend_forcing(0.5), 0.12), 0.5, 35);
    check(circuit_field(circuit_default_params(), plateau_hat(2.0), -0.5), -3, 3);
    check(transient_cubic_field(0.2, constant(0.1)), -1.5, 1.2);
}

TEST_CASE("concavity report distinguishes the hunting regimes") {
    const ScalarField f = hunting_concave_field(0.0);
    std::vector<double> xs;
    for (double x = -2.0; x <= 3.0; x += 0.05) xs.push_back(x);

    // b(0) = 0 (no hunting): the law is concave there; b(4) = 1 breaks it
    const auto rep = concavity_report(f, ConcavityMode::concave, {0.0, 4.0}, xs);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].strictly_decreasing);
    CHECK_FALSE(rep.rows[1].strictly_decreasing);
    CHECK(rep.any_nonstrict);
    CHECK(rep.fraction_strict == Catch::Approx(0.5));
}

TEST_CASE("a quadratic law is flagged non-strict in the d-concave mode") {
    ScalarField quad;
    quad.f = [](double, double x) { return -x * x + 1; };
    quad.fx = [](double, double x) { return -2.0 * x; };
    quad.fxx = [](double, double) { return -2.0; };
    std::vector<double> xs{-1.0, 0.0, 1.0};
    const auto rep = concavity_report(quad, ConcavityMode::d_concave, {0.0}, xs);
    CHECK_FALSE(rep.rows[0].strictly_decreasing);
    CHECK(rep.any_nonstrict);
}

TEST_CASE("declared lambda monotonicity holds on sampled pairs") {
    struct Case {
        ParametricFamily fam;
    };
    const std::vector<ParametricFamily> fams = {
        hunting_concave_family(), hunting_dconcave_family(), hunting_predation_family(),
        holling_family(holling_quasiperiodic_coefficients(), plateau_hat(1.0)),
        circuit_family(circuit_default_params(), constant(0.0)),
        transient_cubic_family(constant(0.0))};
    std::mt19937_64 rng(31);
    for (const auto& fam : fams) {
        std::uniform_real_distribution<double> ut(fam.check_t_lo, fam.check_t_hi);
        std::uniform_real_distribution<double> ux(fam.check_x_lo, fam.check_x_hi);
        const double lam_lo = std::max(fam.lambda_min, 0.01);
        const double l1 = lam_lo, l2 = lam_lo + 0.2;
        const ScalarField f1 = fam.at(l1), f2 = fam.at(l2);
        bool strict_somewhere = false;
        for (int i = 0; i < 100; ++i) {
            const double t = ut(rng), x = ux(rng);
            const double d = f2.f(t, x) - f1.f(t, x);
            if (fam.increases_with_lambda) CHECK(d >= -1e-12);
            else CHECK(d <= 1e-12);
            if (std::abs(d) > 1e-6) strict_somewhere = true;
        }
        CAPTURE(fam.name);
        CHECK(strict_somewhere);
    }
}
