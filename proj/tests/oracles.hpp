#pragma once

// Test-only oracles, independent of the bisection/pullback machinery.

#include "saddlenode/bifurcate.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlenode::testing {

// Saddle-node values of x' = -x^3 + b x^2 + c x + lambda from the system
// {h = 0, h' = 0}: critical points of the cubic via the quadratic formula,
// lambda = -h0(x*) there. Requires two real critical points (b^2 + 3c > 0).
struct CubicSaddleValues {
    double lambda_minus, lambda_plus;
};

inline CubicSaddleValues cubic_saddle_oracle(double b, double c) {
    const double disc = b * b + 3.0 * c;
    if (!(disc > 0)) throw std::invalid_argument("cubic oracle: no saddle-node pair");
    const double s = std::sqrt(disc);
    const double x1 = (b - s) / 3.0, x2 = (b + s) / 3.0;
    auto h0 = [&](double x) { return -x * x * x + b * x * x + c * x; };
    const double l1 = -h0(x1), l2 = -h0(x2);
    return {std::min(l1, l2), std::max(l1, l2)};
}

inline ParametricFamily cubic_test_family(double b, double c) {
    ParametricFamily fam;
    fam.at = [b, c](double lambda) {
        ScalarField f;
        f.lambda = lambda;
        f.name = "cubic_test";
        f.f = [b, c, lambda](double, double x) {
            return -x * x * x + b * x * x + c * x + lambda;
        };
        f.fx = [b, c](double, double x) { return -3.0 * x * x + 2.0 * b * x + c; };
        f.fxx = [b](double, double x) { return -6.0 * x + 2.0 * b; };
        return f;
    };
    fam.increases_with_lambda = true;
    fam.name = "cubic_test";
    return fam;
}

}  // namespace saddlenode::testing
