#include "saddlenode/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace saddlenode {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// cubic Allee core x(1-x)(x-2)/6 and its derivatives
double allee(double x) { return x * (1.0 - x) * (x - 2.0) / 6.0; }
double allee_x(double x) { return (-3.0 * x * x + 6.0 * x - 2.0) / 6.0; }
double allee_xx(double x) { return 1.0 - x; }

// Holling type III response x^2/(b+x^2) and derivatives in x
double holl(double b, double x) { return x * x / (b + x * x); }
double holl_x(double b, double x) {
    const double d = b + x * x;
    return 2.0 * b * x / (d * d);
}
double holl_xx(double b, double x) {
    const double d = b + x * x;
    return 2.0 * b * (b - 3.0 * x * x) / (d * d * d);
}

void require_bounded(const TimeSignal& s, double lo, double hi, const char* what,
                     bool below_by /* true: require s > lo; false: require s < hi */) {
    for (int i = 0; i <= 400; ++i) {
        const double t = -100.0 + 0.5 * i;
        const double v = s(t);
        if (below_by ? !(v > lo) : !(v < hi))
            throw std::invalid_argument(std::string("model parameter out of validity: ") + what);
    }
}

}  // namespace

ScalarField hunting_concave_field(double lambda, TimeSignal b) {
    ScalarField f;
    f.lambda = lambda;
    f.name = "hunting_concave";
    f.f = [b, lambda](double t, double x) {
        return x * (1.0 - x) / 6.0 - b(t) * holl(1.0, x) + lambda;
    };
    f.fx = [b](double t, double x) { return (1.0 - 2.0 * x) / 6.0 - b(t) * holl_x(1.0, x); };
    f.fxx = [b](double t, double x) { return -1.0 / 3.0 - b(t) * holl_xx(1.0, x); };
    return f;
}

ParametricFamily hunting_concave_family(TimeSignal b) {
    ParametricFamily fam;
    fam.at = [b](double lambda) { return hunting_concave_field(lambda, b); };
    fam.increases_with_lambda = true;
    fam.name = "hunting_concave";
    return fam;
}

ScalarField hunting_dconcave_field(double lambda, TimeSignal b) {
    ScalarField f;
    f.lambda = lambda;
    f.name = "hunting_dconcave";
    f.f = [b, lambda](double t, double x) { return allee(x) - b(t) * holl(1.0, x) + lambda; };
    f.fx = [b](double t, double x) { return allee_x(x) - b(t) * holl_x(1.0, x); };
    f.fxx = [b](double t, double x) { return allee_xx(x) - b(t) * holl_xx(1.0, x); };
    return f;
}

ParametricFamily hunting_dconcave_family(TimeSignal b) {
    ParametricFamily fam;
    fam.at = [b](double lambda) { return hunting_dconcave_field(lambda, b); };
    fam.increases_with_lambda = true;
    fam.name = "hunting_dconcave";
    return fam;
}

ScalarField hunting_predation_field(double lambda, TimeSignal b) {
    ScalarField f;
    f.lambda = lambda;
    f.name = "hunting_predation";
    f.f = [b, lambda](double t, double x) { return allee(x) - lambda * b(t) * holl(1.0, x); };
    f.fx = [b, lambda](double t, double x) { return allee_x(x) - lambda * b(t) * holl_x(1.0, x); };
    f.fxx = [b, lambda](double t, double x) { return allee_xx(x) - lambda * b(t) * holl_xx(1.0, x); };
    return f;
}

ParametricFamily hunting_predation_family(TimeSignal b) {
    ParametricFamily fam;
    fam.at = [b](double lambda) { return hunting_predation_field(lambda, b); };
    fam.increases_with_lambda = false;  // more predation removes structure
    fam.check_x_lo = 0.5;  // the lambda-coefficient vanishes at x = 0
    fam.check_x_hi = 2.5;
    fam.name = "hunting_predation";
    return fam;
}

HollingCoefficients holling_quasiperiodic_coefficients() {
    HollingCoefficients c;
    c.r = constant(0.95) + harmonic(0.02, two_pi, 0, Waveform::sine) +
          harmonic(0.02, 0.1, 0, Waveform::sine);
    c.K = constant(30.0) + harmonic(3.2, two_pi, 0, Waveform::sine) +
          harmonic(1.0, 3.0 * two_pi, 0, Waveform::sine) +
          harmonic(0.4, 5.0 * std::sqrt(5.0), 0, Waveform::cosine) +
          harmonic(0.4, 40.0, 0, Waveform::cosine);
    c.Gamma = constant(-160.0) + harmonic(-16.0, two_pi, 0, Waveform::sine);
    c.b = constant(400.0) +
          product(harmonic(26.0, 40.0, 0, Waveform::cosine), harmonic(1.0, 40.0, 0, Waveform::cosine));
    c.a = -3.0;
    return c;
}

HollingCoefficients holling_boosted_coefficients() {
    HollingCoefficients c = holling_quasiperiodic_coefficients();
    c.Gamma = product(c.Gamma, gaussian_factor(2.0, 10.0));
    return c;
}

ScalarField holling_field(const HollingCoefficients& c, const TimeSignal& p, double lambda) {
    require_bounded(c.K, 1e-6, 0, "K must be positively bounded below", true);
    require_bounded(c.b, 1e-6, 0, "b must be positively bounded below", true);
    require_bounded(c.Gamma, 0, -1e-6, "Gamma must be negatively bounded above", false);
    ScalarField f;
    f.lambda = lambda;
    f.name = "holling_population";
    const TimeSignal r = c.r, K = c.K, G = c.Gamma, b = c.b;
    const double a = c.a;
    f.f = [=](double t, double x) {
        return r(t) * x * (1.0 - x / K(t)) + lambda * G(t) * holl(b(t), x) + p(t) + a;
    };
    f.fx = [=](double t, double x) {
        return r(t) * (1.0 - 2.0 * x / K(t)) + lambda * G(t) * holl_x(b(t), x);
    };
    f.fxx = [=](double t, double x) {
        return -2.0 * r(t) / K(t) + lambda * G(t) * holl_xx(b(t), x);
    };
    return f;
}

ParametricFamily holling_family(HollingCoefficients c, TimeSignal p) {
    ParametricFamily fam;
    fam.at = [c, p](double lambda) { return holling_field(c, p, lambda); };
    fam.increases_with_lambda = false;  // Gamma < 0
    fam.lambda_min = 0.0;               // predation model is posed for lambda >= 0
    fam.check_x_lo = 1.0;
    fam.check_x_hi = 30.0;
    fam.name = "holling_population";
    return fam;
}

TimeSignal hat_forcing(double k) { return plateau_hat(k); }

TimeSignal slow_blend_forcing(double k) {
    return arctan_blend(harmonic(1.0, 1.0 / 20.0, 0, Waveform::sine), 2.0 * k - 1.0, k);
}

TimeSignal fast_blend_forcing(double k) {
    return arctan_blend(harmonic(1.0, 1.0, 0, Waveform::sine), 2.0 * k - 1.0, k);
}

TimeSignal positive_blend_forcing(double k) {
    TimeSignal base = scale_add(harmonic(1.0, 1.0 / 20.0, 0, Waveform::sine), 0.5, 0.5);
    return arctan_blend(std::move(base), 2.0 * k - 1.0, k);
}

CircuitParams circuit_default_params() {
    CircuitParams p;
    p.E0 = harmonic(1.0, 1.0, 0, Waveform::sine) + harmonic(1.0, std::sqrt(2.0), 0, Waveform::sine);
    p.C0 = constant(1.0);
    return p;
}

namespace {

double circuit_rho(const CircuitParams& p) {
    return p.alpha - 1.0 / p.R - 3.0 * p.beta * p.V0 * p.V0;
}

void circuit_validate(const CircuitParams& params, const TimeSignal& p) {
    if (!(params.R > 0) || !(params.alpha > 0) || !(params.beta > 0))
        throw std::invalid_argument("circuit: R, alpha, beta must be positive");
    const double i0_forced = params.beta * std::pow(params.V0, 3) - params.alpha * params.V0;
    const double i0 = params.I0.value_or(i0_forced);
    if (std::abs(i0 + params.alpha * params.V0 - params.beta * std::pow(params.V0, 3)) >
        1e-12 * std::max(1.0, std::abs(i0)))
        throw std::invalid_argument("circuit: I0 + alpha V0 - beta V0^3 must vanish (f(0)=0)");
    // capacitance positively bounded below
    for (int i = 0; i <= 400; ++i) {
        const double t = -100.0 + 0.5 * i;
        if (!(params.C0(t) + params.A * p(t) > 1e-6))
            throw std::invalid_argument("circuit: C(t) = C0 + A p must stay positive");
    }
}

}  // namespace

ScalarField circuit_field(const CircuitParams& params, const TimeSignal& p, double lambda) {
    circuit_validate(params, p);
    ScalarField f;
    f.lambda = lambda;
    f.name = "tunnel_circuit";
    const TimeSignal E0 = params.E0, C0 = params.C0, ps = p;
    const double R = params.R, beta = params.beta, V0 = params.V0, A = params.A;
    const double rho = circuit_rho(params);
    f.f = [=](double t, double q) {
        const double C = C0(t) + A * ps(t);
        return lambda + E0(t) / R + rho * q / C + 3.0 * beta * V0 * q * q / (C * C) -
               beta * q * q * q / (C * C * C);
    };
    f.fx = [=](double t, double q) {
        const double C = C0(t) + A * ps(t);
        return rho / C + 6.0 * beta * V0 * q / (C * C) - 3.0 * beta * q * q / (C * C * C);
    };
    f.fxx = [=](double t, double q) {
        const double C = C0(t) + A * ps(t);
        return 6.0 * beta * V0 / (C * C) - 6.0 * beta * q / (C * C * C);
    };
    return f;
}

ParametricFamily circuit_family(CircuitParams params, TimeSignal p) {
    circuit_validate(params, p);
    ParametricFamily fam;
    fam.at = [params, p](double lambda) { return circuit_field(params, p, lambda); };
    fam.increases_with_lambda = true;
    fam.check_x_lo = -3.0;
    fam.check_x_hi = 3.0;
    fam.name = "tunnel_circuit";
    return fam;
}

double circuit_kirchhoff_rhs(const CircuitParams& params, const TimeSignal& p,
                             double lambda, double t, double Q) {
    const double C = params.C0(t) + params.A * p(t);
    const double Vd = Q / C;
    const double E = params.E0(t) + lambda * params.R;
    const double I0 = params.I0.value_or(params.beta * std::pow(params.V0, 3) -
                                          params.alpha * params.V0);
    const double f_diode = I0 - params.alpha * (Vd - params.V0) +
                           params.beta * std::pow(Vd - params.V0, 3);
    const double I1 = (E - Vd) / params.R;
    return I1 - f_diode;
}

ScalarField transient_cubic_field(double lambda, const TimeSignal& p) {
    ScalarField f;
    f.lambda = lambda;
    f.name = "transient_cubic";
    f.f = [p, lambda](double t, double x) {
        return -x * x + x * x * x * std::exp(-t * t) + lambda + p(t);
    };
    f.fx = [](double t, double x) { return -2.0 * x + 3.0 * x * x * std::exp(-t * t); };
    f.fxx = [](double t, double x) { return -2.0 + 6.0 * x * std::exp(-t * t); };
    return f;
}

ParametricFamily transient_cubic_family(TimeSignal p) {
    ParametricFamily fam;
    fam.at = [p](double lambda) { return transient_cubic_field(lambda, p); };
    fam.increases_with_lambda = true;
    fam.check_x_lo = -1.5;
    fam.check_x_hi = 1.2;
    fam.name = "transient_cubic";
    return fam;
}

ParametricFamily quadratic_demo_family() {
    ParametricFamily fam;
    fam.at = [](double lambda) {
        ScalarField f;
        f.lambda = lambda;
        f.name = "quadratic_demo";
        f.f = [lambda](double, double x) { return -x * x + lambda; };
        f.fx = [](double, double x) { return -2.0 * x; };
        f.fxx = [](double, double) { return -2.0; };
        return f;
    };
    fam.increases_with_lambda = true;
    fam.name = "quadratic_demo";
    return fam;
}

ParametricFamily cubic_demo_family() {
    ParametricFamily fam;
    fam.at = [](double lambda) {
        ScalarField f;
        f.lambda = lambda;
        f.name = "cubic_demo";
        f.f = [lambda](double, double x) { return -x * x * x + x + lambda; };
        f.fx = [](double, double x) { return -3.0 * x * x + 1.0; };
        f.fxx = [](double, double x) { return -6.0 * x; };
        return f;
    };
    fam.increases_with_lambda = true;
    fam.name = "cubic_demo";
    return fam;
}

ConcavitySummary concavity_report(const ScalarField& field, ConcavityMode mode,
                                  const std::vector<double>& t_grid,
                                  const std::vector<double>& x_grid) {
    if (x_grid.size() < 2) throw std::invalid_argument("concavity_report: x_grid too small");
    if (mode == ConcavityMode::d_concave && !field.fxx)
        throw std::invalid_argument("concavity_report: field has no second derivative");
    ConcavitySummary sum;
    sum.mode = mode;
    long strict = 0;
    for (double t : t_grid) {
        ConcavityRow row;
        row.t = t;
        row.strictly_decreasing = true;
        double prev = mode == ConcavityMode::concave ? field.fx(t, x_grid[0])
                                                     : field.fxx(t, x_grid[0]);
        for (std::size_t i = 1; i < x_grid.size(); ++i) {
            const double cur = mode == ConcavityMode::concave ? field.fx(t, x_grid[i])
                                                              : field.fxx(t, x_grid[i]);
            const double inc = cur - prev;
            if (inc >= 0) {
                row.strictly_decreasing = false;
                row.worst_increase = std::max(row.worst_increase, inc);
            }
            prev = cur;
        }
        if (row.strictly_decreasing) ++strict;
        else sum.any_nonstrict = true;
        sum.rows.push_back(row);
    }
    sum.fraction_strict = t_grid.empty() ? 0.0 : (double)strict / (double)t_grid.size();
    return sum;
}

}  // namespace saddlenode
