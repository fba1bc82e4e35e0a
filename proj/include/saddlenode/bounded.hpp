#pragma once

#include "saddlenode/integrate.hpp"

#include <Eigen/Core>

#include <optional>

namespace saddlenode {

enum class SolutionRole { lower, middle, upper };
enum class StabilityKind { attractive, repulsive };

struct HyperbolicityCertificate {
    double exponent = 0.0;  // finite-time Lyapunov average over the window
    StabilityKind kind = StabilityKind::attractive;
    double margin = 0.0;    // gamma_min the certificate was issued against
    bool probe_decay_ok = false;
    double window_lo = 0.0, window_hi = 0.0;
};

/// Sampled bounded-solution estimate on [window_lo, window_hi]. `path` is the
/// final pullback run and covers at least the window, so dense values and
/// Lyapunov quadrature remain available. Immutable in all operations.
struct BoundedSolutionEstimate {
    SolutionRole role = SolutionRole::upper;
    double window_lo = 0.0, window_hi = 0.0;
    Eigen::ArrayXd times;
    Eigen::ArrayXd values;
    double residual = 0.0;  // sup change over the last pullback doubling
    bool converged = false;
    bool exists = true;     // false: every pullback run escaped (no bounded solution)
    int escape_sign = 0;    // +1/-1 when exists == false
    double depth_used = 0.0;
    std::optional<HyperbolicityCertificate> certificate;
    Trajectory path;

    double value_at(double t) const;  // linear interpolation on the sample grid
};

struct PullbackOptions {
    double tol = 1e-8;           // integration tolerance and residual target
    double initial_depth = 0.0;  // 0 = window length
    int max_doublings = 12;
    int samples_per_unit = 8;
    double x_guard = 1e6;
    // forward pullback starts are clamped to be no earlier than this time;
    // used to anchor "future" reference structures past a transition
    std::optional<double> anchor_limit;
};

/// Pullback estimate of the upper bounded solution: forward runs from
/// (window_lo - S_n, x_hi) with doubling depths until the restriction to the
/// window settles. x_hi must lie above every bounded solution.
BoundedSolutionEstimate upper_bounded(const ScalarField& field,
                                      double window_lo, double window_hi, double x_hi,
                                      const PullbackOptions& opt = {});

enum class LowerMode { forward, backward };

/// mode == backward: backward runs from (window_hi + S_n, x_lo) capture a
/// repulsive lower solution (concave case). mode == forward: forward runs
/// from below capture an attractive lower solution (d-concave case).
BoundedSolutionEstimate lower_bounded(const ScalarField& field,
                                      double window_lo, double window_hi, double x_lo,
                                      LowerMode mode, const PullbackOptions& opt = {});

enum class MiddleMethod { backward_pullback, basin_bisection };

/// Estimate of the repulsive middle solution strictly between two converged
/// estimates. backward_pullback integrates backward from midpoints of the
/// forward-extended bracket; basin_bisection locates the separatrix of the
/// upper/lower basins by bisecting initial values, re-bisecting along the
/// window so forward error never accumulates. Throws std::invalid_argument
/// if the bracket gap is below 10*tol.
BoundedSolutionEstimate middle_bounded(const ScalarField& field,
                                       const BoundedSolutionEstimate& lower,
                                       const BoundedSolutionEstimate& upper,
                                       MiddleMethod method,
                                       const PullbackOptions& opt = {});

struct CertifyOptions {
    double gamma_min = 0.02;
    double rho_probe = 1e-3;
    double tol = 1e-8;
    double x_guard = 1e6;
};

/// Finite-time hyperbolicity certificate: Lyapunov average over the window
/// plus perturbation probes whose decay direction must agree with the sign.
/// Returns nullopt when |exponent| < gamma_min or the probes disagree.
std::optional<HyperbolicityCertificate> certify(const ScalarField& field,
                                                const BoundedSolutionEstimate& estimate,
                                                const CertifyOptions& opt = {});

/// inf over the common sample grid of |x1(t)-x2(t)|; windows must agree.
double separation(const BoundedSolutionEstimate& a, const BoundedSolutionEstimate& b);

/// Constant reference estimate (e.g. an equilibrium used as a comparison
/// attractor); converged by construction, certificate left to certify().
BoundedSolutionEstimate constant_estimate(double value, SolutionRole role,
                                          double window_lo, double window_hi,
                                          int samples_per_unit = 8);

}  // namespace saddlenode
