#pragma once

#include "saddlenode/bifurcate.hpp"

namespace saddlenode {

enum class TransitionOutcome { tracking, tipping, boundary };

struct TransitionVerdict {
    TransitionOutcome outcome = TransitionOutcome::boundary;
    double dist_tracked = std::numeric_limits<double>::quiet_NaN();
    double dist_alternative = std::numeric_limits<double>::quiet_NaN();
    bool blew_up = false;
    int escape_sign = 0;
    double escape_time = 0.0;
    double terminal_value = std::numeric_limits<double>::quiet_NaN();
    double horizon = 0.0;
};

/// Future references against which the pullback solution is compared.
/// `alternative` is the competing attractor (e.g. extinction at 0); when
/// absent, tipping is recognized by blow-up only.
struct AttractorRefs {
    BoundedSolutionEstimate tracked;
    std::optional<BoundedSolutionEstimate> alternative;
};

struct ClassifyOptions {
    double approach_tol = 1e-3;      // sup-norm over the final 10% of the horizon
    double extinction_threshold = 1e-4;
    bool extinction_rule = false;    // terminal below threshold counts as tipping to 0
    double past_window_lo = -40.0;   // pullback anchor window for the attracting solution
    double past_window_hi = 0.0;
    std::optional<double> x_hi;      // start level; auto-derived when absent
    PullbackOptions pullback;
    int scan_samples_per_unit = 4;
};

/// Classifies the fate of the locally pullback attractive solution: computed
/// on the past window, continued to the horizon, and compared against the
/// references on the final 10% of [past_window_hi, horizon]. Requires
/// converged references covering that comparison window.
TransitionVerdict classify(const ScalarField& field, const AttractorRefs& refs,
                           double horizon, const ClassifyOptions& opt);

struct TippingProblem {
    ParametricFamily family;
    std::function<AttractorRefs(double)> refs_for;
    double horizon = 100.0;
    ClassifyOptions copts;
};

/// Bisection on the classify verdict; tracking at one end and tipping at the
/// other is required. Boundary verdicts split the bracket into a tracking
/// edge and a tipping edge which are narrowed separately; the result is the
/// midpoint with the boundary span reported as undetermined width.
BifurcationResult find_tipping(const TippingProblem& problem,
                               double lambda_lo, double lambda_hi, double tol_lambda);

}  // namespace saddlenode
