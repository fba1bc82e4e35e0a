#pragma once

#include "saddlenode/bifurcate.hpp"
#include "saddlenode/signals.hpp"

#include <vector>

namespace saddlenode {

// ---- hunting model: population with increasingly spaced hunting periods ----

/// x' = x(1-x)/6 - b(t) x^2/(1+x^2) + lambda   (concave core)
ScalarField hunting_concave_field(double lambda, TimeSignal b = bump_train());
ParametricFamily hunting_concave_family(TimeSignal b = bump_train());

/// x' = x(1-x)(x-2)/6 - b(t) x^2/(1+x^2) + lambda   (Allee core, additive forcing)
ScalarField hunting_dconcave_field(double lambda, TimeSignal b = bump_train());
ParametricFamily hunting_dconcave_family(TimeSignal b = bump_train());

/// x' = x(1-x)(x-2)/6 - lambda b(t) x^2/(1+x^2)   (predation magnitude as the
/// parameter; the critical-transition equation)
ScalarField hunting_predation_field(double lambda, TimeSignal b = bump_train());
ParametricFamily hunting_predation_family(TimeSignal b = bump_train());

// ---- population model with Holling type III predation and emigration ----

struct HollingCoefficients {
    TimeSignal r, K, Gamma, b;
    double a = -3.0;
};

/// Quasiperiodic coefficients of the first population simulation.
HollingCoefficients holling_quasiperiodic_coefficients();
/// Same, with the transient predation boost (1 + 2 exp(-10 t^2)) on Gamma.
HollingCoefficients holling_boosted_coefficients();

/// x' = r(t) x (1 - x/K(t)) + lambda Gamma(t) x^2/(b(t)+x^2) + p(t) + a.
/// Throws std::invalid_argument if K or b is not positively bounded below on
/// a sampled range, or Gamma not negatively bounded above.
ScalarField holling_field(const HollingCoefficients& c, const TimeSignal& p, double lambda);
ParametricFamily holling_family(HollingCoefficients c, TimeSignal p);

// forcing families used by the population simulations
TimeSignal hat_forcing(double k);                   // tent/plateau p_k
TimeSignal slow_blend_forcing(double k);            // sin(t/20) blended to 2k-1
TimeSignal fast_blend_forcing(double k);            // sin(t) blended to 2k-1
TimeSignal positive_blend_forcing(double k);        // (sin(t/20)+1)/2 blended to 2k-1

// ---- tunnel-diode circuit ----

struct CircuitParams {
    TimeSignal E0, C0;
    double R = 1.0;
    double alpha = 19.0 / 3.0;
    double beta = 1.0;
    double V0 = 1.0 / 3.0;
    double A = 0.2;
    // diode current at V0; defaults to the value forced by f(0) = 0
    std::optional<double> I0;
};

CircuitParams circuit_default_params();  // E0 = sin t + sin(sqrt 2 t), C0 = 1

/// Kirchhoff reduction of the circuit to Q' = lambda + E0(t)/R + rho Q/C(t)
/// + 3 beta V0 Q^2/C^2 - beta Q^3/C^3 with rho = alpha - 1/R - 3 beta V0^2
/// and C = C0 + A p. Verifies I0 + alpha V0 - beta V0^3 = 0 and C > 0 on a
/// sampled range; throws std::invalid_argument otherwise.
ScalarField circuit_field(const CircuitParams& params, const TimeSignal& p, double lambda);
ParametricFamily circuit_family(CircuitParams params, TimeSignal p);

/// Direct Kirchhoff evaluation I1 - I2 = (E_lambda - V_d)/R - f(V_d), the
/// oracle the reduced field is tested against.
double circuit_kirchhoff_rhs(const CircuitParams& params, const TimeSignal& p,
                             double lambda, double t, double Q);

// ---- small demonstration fields ----

/// x' = -x^2 + x^3 exp(-t^2) + lambda + p(t): quadratic coercive tails with a
/// transient cubic hump near t = 0, additively forced. Not concave near t = 0.
ScalarField transient_cubic_field(double lambda, const TimeSignal& p);
ParametricFamily transient_cubic_family(TimeSignal p);

/// x' = -x^2 + lambda and x' = -x^3 + x + lambda, autonomous demos with
/// closed-form saddle-node values.
ParametricFamily quadratic_demo_family();
ParametricFamily cubic_demo_family();

// ---- diagnostics ----

enum class ConcavityMode { concave, d_concave };

struct ConcavityRow {
    double t = 0.0;
    bool strictly_decreasing = false;  // x -> fx (concave) or x -> fxx (d-concave)
    double worst_increase = 0.0;       // largest nondecreasing increment found
};

struct ConcavitySummary {
    ConcavityMode mode = ConcavityMode::concave;
    std::vector<ConcavityRow> rows;
    double fraction_strict = 0.0;
    bool any_nonstrict = false;
};

/// Reports, per t of the grid, whether the relevant derivative is numerically
/// strictly decreasing on the x-grid. A diagnostic for the in-measure
/// hypotheses, not a proof.
ConcavitySummary concavity_report(const ScalarField& field, ConcavityMode mode,
                                  const std::vector<double>& t_grid,
                                  const std::vector<double>& x_grid);

}  // namespace saddlenode
