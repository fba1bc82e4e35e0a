#include "saddlenode/signals.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace saddlenode;

TEST_CASE("spline bump values") {
    const TimeSignal g = spline_bump();
    CHECK(g(0.0) == 1.0);
    CHECK(g(1.0) == 1.0);
    CHECK(g(-1.0) == 1.0);
    CHECK(g(0.73) == 1.0);
    CHECK(g(1.2) == Catch::Approx(0.0).margin(1e-14));
    CHECK(g(-1.2) == Catch::Approx(0.0).margin(1e-14));
    CHECK(g(2.0) == 0.0);
    // midpoint of the Hermite edge piece (values 1 -> 0, flat ends)
    CHECK(g(1.1) == Catch::Approx(0.5).margin(1e-12));
    CHECK(g(-1.1) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("spline bump is C1 at the joints") {
    const TimeSignal g = spline_bump();
    const double h = 1e-5;
    for (double a : {1.0, 1.2, -1.0, -1.2}) {
        // second-order one-sided stencils
        const double left = (3 * g(a) - 4 * g(a - h) + g(a - 2 * h)) / (2 * h);
        const double right = (-3 * g(a) + 4 * g(a + h) - g(a + 2 * h)) / (2 * h);
        CHECK(std::abs(left - right) < 1e-7);
    }
}

TEST_CASE("bump train covers exactly the squares") {
    const TimeSignal b = bump_train();
    CHECK(b(4.0) == 1.0);   // n = 2
    CHECK(b(0.0) == 0.0);
    CHECK(b(6.5) == 0.0);   // between the n=2 and n=3 supports
    CHECK(b(9.0) == 1.0);
    CHECK(b(1.0) == 0.0);   // n = 1 excluded by the start index
    CHECK(b(2.7) == 0.0);
    CHECK(b(5.1) == Catch::Approx(spline_bump()(1.1)).margin(1e-14));
}

TEST_CASE("shift is a flow action") {
    const TimeSignal s = harmonic(1.0, 1.0, 0.0, Waveform::sine);
    CHECK(shift(s, std::numbers::pi)(0.0) == Catch::Approx(std::sin(std::numbers::pi)).margin(1e-15));
    const TimeSignal b = bump_train();
    for (double t = -7.0; t <= 7.0; t += 0.37) {
        CHECK(shift(b, 0.0)(t) == b(t));
        CHECK(shift(shift(b, 1.5), -2.25)(t) == b(t - 0.75));
    }
}

TEST_CASE("plateau hat family") {
    // k = 0 is the constant 1; growing k carves a valley of depth down to -1
    const TimeSignal p0 = plateau_hat(0.0);
    CHECK(p0(0.0) == 1.0);
    CHECK(p0(2.0) == 1.0);
    CHECK(p0(-0.5) == 1.0);
    const TimeSignal p1 = plateau_hat(1.0);
    CHECK(p1(0.0) == 0.5);
    CHECK(p1(0.25) == 0.75);
    CHECK(p1(3.0) == 1.0);
    const TimeSignal p6 = plateau_hat(6.0);
    CHECK(p6(0.0) == -1.0);
    CHECK(p6(0.9) == -1.0);  // flat floor for k > 4
    CHECK(p6(3.0) == Catch::Approx(1.0));
    CHECK(p6(4.0) == 1.0);
    // pointwise decreasing in k, bounded by the space constants
    for (double t = -30.0; t <= 30.0; t += 0.1) {
        CHECK(p6(t) <= p1(t));
        CHECK(p1(t) <= p0(t));
        CHECK(p6(t) <= 1.0);
        CHECK(p6(t) >= -1.0);
    }
}

TEST_CASE("arctan blend interpolates past to future level") {
    const TimeSignal base = harmonic(1.0, 0.05, 0.0, Waveform::sine);
    const double k = 0.25, target = 2 * k - 1;
    const TimeSignal p = arctan_blend(base, target, k);
    CHECK(std::abs(p(-4000.0) - base(-4000.0)) < 2e-3);
    CHECK(std::abs(p(4000.0) - target) < 2e-3);
    for (double t = -500.0; t <= 500.0; t += 1.7) {
        CHECK(p(t) <= 1.0 + 1e-12);
        CHECK(p(t) >= -1.0 - 1e-12);
    }
}

TEST_CASE("gaussian factor") {
    const TimeSignal g = gaussian_factor(2.0, 10.0);
    CHECK(g(0.0) == 3.0);
    CHECK(g(100.0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("random expression trees stay finite") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> pick(0, 6);
    for (int rep = 0; rep < 50; ++rep) {
        TimeSignal s = constant(u(rng));
        for (int d = 0; d < 6; ++d) {
            switch (pick(rng)) {
                case 0: s = s + harmonic(u(rng), std::abs(u(rng)) + 0.1, u(rng), Waveform::sine); break;
                case 1: s = product(s, harmonic(1.0, std::abs(u(rng)) + 0.1, 0, Waveform::cosine)); break;
                case 2: s = scale_add(s, u(rng), u(rng)); break;
                case 3: s = shift(s, u(rng)); break;
                case 4: s = s + spline_bump(); break;
                case 5: s = product(s, gaussian_factor(std::abs(u(rng)), std::abs(u(rng)) + 0.1)); break;
                case 6: s = s + plateau_hat(std::abs(u(rng))); break;
            }
        }
        for (int i = 0; i < 40; ++i) CHECK(std::isfinite(s(50.0 * u(rng))));
    }
}
