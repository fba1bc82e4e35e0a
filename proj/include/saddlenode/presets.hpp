#pragma once

#include "saddlenode/models.hpp"
#include "saddlenode/transitions.hpp"

namespace saddlenode::presets {

// ---- population bifurcations (quasiperiodic and boosted coefficients) ----

/// Window [-40,40], default tolerances. All reported population values are
/// windowed bifurcation values; outputs document the window.
StructureOptions population_structure_options();

ParametricFamily population_family(const TimeSignal& p, bool boosted);

/// Cold bisection bracket for the population model (structure present at the
/// low end, absent at the high end).
inline constexpr double kPopulationLambdaLo = 0.01;
inline constexpr double kPopulationLambdaHi = 0.6;

BifurcationResult population_bifurcation(const TimeSignal& p, bool boosted,
                                         double tol_lambda,
                                         const StructureOptions* opt = nullptr);

/// Bifurcation value of the boosted model under the slow arctan blend p_k.
/// The blend settles only around t = 1/k^2, which outruns any fixed window,
/// so the value combines the base instance on [-40,40] with the time-shifted
/// (settled-future) instance on its own window; the minimum governs
/// existence. k = 0 means the unblended base forcing sin(t/20).
struct BlendPoint {
    double k = 0.0;
    double lambda = 0.0;         // min(base, future)
    double lambda_base = 0.0;
    double lambda_future = 0.0;  // NaN for k = 0
    double future_shift = 0.0;
};
BlendPoint population_blend_bifurcation(double k, double tol_lambda,
                                        const StructureOptions* opt = nullptr);

// ---- transitions ----

/// Critical transition of the hunting model under predation magnitude
/// (three-solution structure tracked vs extinction to 0).
TippingProblem hunting_transition_problem(double horizon = 165.0);

/// Transition of the boosted population model under the fast blend p_k
/// (two-solution concave structure; tipping is finite-time blow-down).
TippingProblem population_transition_problem(double k = 0.5, double horizon = 40.0);

// ---- circuit ----

StructureOptions circuit_structure_options();
inline constexpr double kCircuitSeed = -0.5;
inline constexpr double kCircuitScanRadius = 0.5;

ParametricFamily circuit_hat_family(double k, double s);  // p = shifted plateau hat
ParametricFamily circuit_blend_family(double k);          // p = positive slow blend

struct CircuitBlendPoint {
    double k = 0.0;
    double lambda_minus = 0.0, lambda_plus = 0.0;  // combined over base + future
    double base_minus = 0.0, base_plus = 0.0;
    double future_minus = 0.0, future_plus = 0.0;  // NaN for k = 0
    double future_shift = 0.0;
};
CircuitBlendPoint circuit_blend_double(double k, double tol_lambda,
                                       const StructureOptions* opt = nullptr);

}  // namespace saddlenode::presets
