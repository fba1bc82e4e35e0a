#include "saddlenode/presets.hpp"

#include <cmath>
#include <limits>

namespace saddlenode::presets {

namespace {

HollingCoefficients shifted_coefficients(const HollingCoefficients& c, double s) {
    HollingCoefficients out;
    out.r = shift(c.r, s);
    out.K = shift(c.K, s);
    out.Gamma = shift(c.Gamma, s);
    out.b = shift(c.b, s);
    out.a = c.a;
    return out;
}

TimeSignal slow_base() { return harmonic(1.0, 1.0 / 20.0, 0, Waveform::sine); }
TimeSignal positive_base() {
    return scale_add(harmonic(1.0, 1.0 / 20.0, 0, Waveform::sine), 0.5, 0.5);
}

}  // namespace

StructureOptions population_structure_options() {
    StructureOptions opt;
    opt.window_lo = -40.0;
    opt.window_hi = 40.0;
    return opt;
}

ParametricFamily population_family(const TimeSignal& p, bool boosted) {
    return holling_family(boosted ? holling_boosted_coefficients()
                                  : holling_quasiperiodic_coefficients(),
                          p);
}

BifurcationResult population_bifurcation(const TimeSignal& p, bool boosted,
                                         double tol_lambda, const StructureOptions* opt) {
    const StructureOptions sopts = opt ? *opt : population_structure_options();
    return find_saddle_node(population_family(p, boosted), kPopulationLambdaLo,
                            kPopulationLambdaHi, tol_lambda, sopts);
}

BlendPoint population_blend_bifurcation(double k, double tol_lambda,
                                        const StructureOptions* opt) {
    const StructureOptions sopts = opt ? *opt : population_structure_options();
    BlendPoint pt;
    pt.k = k;
    if (k <= 0.0) {
        pt.lambda_base = population_bifurcation(slow_base(), true, tol_lambda, &sopts).lambda_tilde;
        pt.lambda = pt.lambda_base;
        pt.lambda_future = std::numeric_limits<double>::quiet_NaN();
        return pt;
    }
    pt.lambda_base =
        population_bifurcation(slow_blend_forcing(k), true, tol_lambda, &sopts).lambda_tilde;
    pt.future_shift = 40.0 + 2.0 / (k * k);
    const HollingCoefficients fut =
        shifted_coefficients(holling_boosted_coefficients(), pt.future_shift);
    const TimeSignal p_fut = shift(slow_blend_forcing(k), pt.future_shift);
    pt.lambda_future = find_saddle_node(holling_family(fut, p_fut), kPopulationLambdaLo,
                                        kPopulationLambdaHi, tol_lambda, sopts)
                           .lambda_tilde;
    pt.lambda = std::min(pt.lambda_base, pt.lambda_future);
    return pt;
}

TippingProblem hunting_transition_problem(double horizon) {
    TippingProblem prob;
    prob.family = hunting_predation_family();
    prob.horizon = horizon;
    prob.copts.past_window_lo = -20.0;
    prob.copts.past_window_hi = 0.0;
    prob.copts.approach_tol = 1e-3;
    prob.copts.extinction_rule = true;
    prob.copts.extinction_threshold = 1e-4;

    const double ref_lo = horizon - 0.2 * horizon;
    prob.refs_for = [horizon, ref_lo](double lambda) {
        const ScalarField field = hunting_predation_field(lambda);
        PullbackOptions pb;
        pb.initial_depth = 0.4 * horizon;
        pb.max_doublings = 6;
        pb.anchor_limit = 28.0;  // past the dense early hunting bumps
        AttractorRefs refs;
        refs.tracked = upper_bounded(field, ref_lo, horizon, 3.0, pb);
        refs.alternative = constant_estimate(0.0, SolutionRole::lower, ref_lo, horizon);
        refs.alternative->certificate = certify(field, *refs.alternative);
        return refs;
    };
    return prob;
}

TippingProblem population_transition_problem(double k, double horizon) {
    TippingProblem prob;
    prob.family = population_family(fast_blend_forcing(k), true);
    prob.horizon = horizon;
    prob.copts.past_window_lo = -40.0;
    prob.copts.past_window_hi = -10.0;
    prob.copts.approach_tol = 1e-3;
    prob.copts.extinction_rule = false;

    const double ref_lo = 0.5 * horizon;
    ParametricFamily fam = prob.family;
    prob.refs_for = [fam, horizon, ref_lo](double lambda) {
        const ScalarField field = fam.at(lambda);
        PullbackOptions pb;
        pb.initial_depth = 0.3 * horizon;
        pb.max_doublings = 6;
        pb.anchor_limit = 8.0;  // past the transient predation boost
        auto lvl = coercive_level_above(field, ref_lo, horizon, 4);
        if (!lvl) throw std::runtime_error("population transition: no coercive start level");
        AttractorRefs refs;
        refs.tracked = upper_bounded(field, ref_lo, horizon, *lvl, pb);
        return refs;
    };
    return prob;
}

StructureOptions circuit_structure_options() {
    StructureOptions opt;
    opt.window_lo = -40.0;
    opt.window_hi = 40.0;
    return opt;
}

ParametricFamily circuit_hat_family(double k, double s) {
    return circuit_family(circuit_default_params(), shift(plateau_hat(k), s));
}

ParametricFamily circuit_blend_family(double k) {
    if (k <= 0.0) return circuit_family(circuit_default_params(), positive_base());
    return circuit_family(circuit_default_params(), positive_blend_forcing(k));
}

CircuitBlendPoint circuit_blend_double(double k, double tol_lambda,
                                       const StructureOptions* opt) {
    const StructureOptions sopts = opt ? *opt : circuit_structure_options();
    CircuitBlendPoint pt;
    pt.k = k;
    const BifurcationResult base = find_double_saddle_node(
        circuit_blend_family(k), kCircuitSeed, kCircuitScanRadius, tol_lambda, sopts);
    pt.base_minus = base.lambda_minus;
    pt.base_plus = base.lambda_plus;
    if (k <= 0.0) {
        pt.lambda_minus = base.lambda_minus;
        pt.lambda_plus = base.lambda_plus;
        pt.future_minus = pt.future_plus = std::numeric_limits<double>::quiet_NaN();
        return pt;
    }
    pt.future_shift = 40.0 + 2.0 / (k * k);
    CircuitParams params = circuit_default_params();
    params.E0 = shift(params.E0, pt.future_shift);
    params.C0 = shift(params.C0, pt.future_shift);
    const BifurcationResult fut = find_double_saddle_node(
        circuit_family(params, shift(positive_blend_forcing(k), pt.future_shift)),
        kCircuitSeed, kCircuitScanRadius, tol_lambda, sopts);
    pt.future_minus = fut.lambda_minus;
    pt.future_plus = fut.lambda_plus;
    // the three-solution interval of the process is cut by every zone
    pt.lambda_minus = std::max(pt.base_minus, pt.future_minus);
    pt.lambda_plus = std::min(pt.base_plus, pt.future_plus);
    return pt;
}

}  // namespace saddlenode::presets
