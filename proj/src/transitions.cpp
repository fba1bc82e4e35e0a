#include "saddlenode/transitions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace saddlenode {

namespace {

double sup_distance(const Trajectory& run, const BoundedSolutionEstimate& ref,
                    double lo, double hi, int samples) {
    double sup = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = lo + (hi - lo) * (double)i / (double)samples;
        sup = std::max(sup, std::abs(run(t) - ref.value_at(t)));
    }
    return sup;
}

}  // namespace

TransitionVerdict classify(const ScalarField& field, const AttractorRefs& refs,
                           double horizon, const ClassifyOptions& opt) {
    if (!refs.tracked.converged)
        throw std::invalid_argument("classify: tracked reference is not converged");
    if (refs.alternative && !refs.alternative->converged)
        throw std::invalid_argument("classify: alternative reference is not converged");
    if (!(horizon > opt.past_window_hi))
        throw std::invalid_argument("classify: horizon must lie beyond the past window");

    TransitionVerdict verdict;
    verdict.horizon = horizon;

    double x_hi;
    if (opt.x_hi) {
        x_hi = *opt.x_hi;
    } else {
        auto lvl = coercive_level_above(field, opt.past_window_lo, opt.past_window_hi,
                                        opt.scan_samples_per_unit);
        if (!lvl) throw std::invalid_argument("classify: no coercive start level found; pass x_hi");
        x_hi = *lvl;
    }

    // locally pullback attractive solution on the past window; if even the
    // past pullback escapes there is nothing left to track
    auto past = upper_bounded(field, opt.past_window_lo, opt.past_window_hi, x_hi, opt.pullback);
    if (!past.exists) {
        verdict.blew_up = true;
        verdict.escape_sign = past.escape_sign;
        verdict.escape_time = past.path.escape_time();
        verdict.outcome = TransitionOutcome::tipping;
        return verdict;
    }

    // continue it to the horizon
    SolveOptions sopt;
    sopt.tol = opt.pullback.tol;
    sopt.x_guard = opt.pullback.x_guard;
    Trajectory cont = solve(field, opt.past_window_hi, past.value_at(opt.past_window_hi),
                            horizon, sopt);
    if (cont.status() != TrajectoryStatus::complete) {
        verdict.blew_up = true;
        verdict.escape_sign = cont.status() == TrajectoryStatus::blowup_plus ? 1 : -1;
        verdict.escape_time = cont.escape_time();
        verdict.outcome = TransitionOutcome::tipping;
        return verdict;
    }

    const double eval_lo = horizon - 0.1 * (horizon - opt.past_window_hi);
    const int samples = std::max(32, (int)std::ceil((horizon - eval_lo) * opt.pullback.samples_per_unit));
    verdict.terminal_value = cont.back_value();
    verdict.dist_tracked = sup_distance(cont, refs.tracked, eval_lo, horizon, samples);
    if (refs.alternative)
        verdict.dist_alternative = sup_distance(cont, *refs.alternative, eval_lo, horizon, samples);

    // the alternative attractor wins ties: a collapsed solution that happens
    // to match a collapsed reference is still a transition
    if (refs.alternative && verdict.dist_alternative <= opt.approach_tol) {
        verdict.outcome = TransitionOutcome::tipping;
        return verdict;
    }
    if (opt.extinction_rule && std::abs(verdict.terminal_value) <= opt.extinction_threshold) {
        verdict.outcome = TransitionOutcome::tipping;
        return verdict;
    }
    if (verdict.dist_tracked <= opt.approach_tol) {
        verdict.outcome = TransitionOutcome::tracking;
        return verdict;
    }
    verdict.outcome = TransitionOutcome::boundary;
    return verdict;
}

namespace {

StructureProbe verdict_probe(double lambda, const TransitionVerdict& v) {
    StructureProbe p;
    p.lambda = lambda;
    switch (v.outcome) {
        case TransitionOutcome::tracking:
            p.verdict = TriState::yes;
            p.structure = true;
            p.note = "tracking";
            break;
        case TransitionOutcome::tipping:
            p.verdict = TriState::no;
            p.note = v.blew_up ? "tipping (blow-up)" : "tipping";
            break;
        case TransitionOutcome::boundary:
            p.verdict = TriState::undetermined;
            p.note = "boundary";
            break;
    }
    return p;
}

}  // namespace

BifurcationResult find_tipping(const TippingProblem& problem,
                               double lambda_lo, double lambda_hi, double tol_lambda) {
    if (!(lambda_lo < lambda_hi)) throw std::invalid_argument("find_tipping: bad bracket");
    BifurcationResult res;
    res.kind = BifurcationKind::single_saddle_node;

    auto classify_at = [&](double lambda) {
        const ScalarField field = problem.family.at(lambda);
        const AttractorRefs refs = problem.refs_for(lambda);
        TransitionVerdict v = classify(field, refs, problem.horizon, problem.copts);
        res.probes.push_back(verdict_probe(lambda, v));
        return v.outcome;
    };

    TransitionOutcome o_lo = classify_at(lambda_lo);
    TransitionOutcome o_hi = classify_at(lambda_hi);
    if (o_lo == o_hi || o_lo == TransitionOutcome::boundary || o_hi == TransitionOutcome::boundary)
        throw std::invalid_argument(
            "find_tipping: need tracking at one endpoint and tipping at the other");

    double track_edge = o_lo == TransitionOutcome::tracking ? lambda_lo : lambda_hi;
    double tip_edge = o_lo == TransitionOutcome::tracking ? lambda_hi : lambda_lo;
    double bnd_lo = std::numeric_limits<double>::quiet_NaN();  // boundary zone, if seen
    double bnd_hi = std::numeric_limits<double>::quiet_NaN();

    while (std::abs(tip_edge - track_edge) > 2.0 * tol_lambda) {
        const double mid = 0.5 * (track_edge + tip_edge);
        const TransitionOutcome o = classify_at(mid);
        if (o == TransitionOutcome::tracking) {
            track_edge = mid;
        } else if (o == TransitionOutcome::tipping) {
            tip_edge = mid;
        } else {
            // narrow both edges onto the boundary zone
            bnd_lo = std::isfinite(bnd_lo) ? std::min(bnd_lo, mid) : mid;
            bnd_hi = std::isfinite(bnd_hi) ? std::max(bnd_hi, mid) : mid;
            const double q1 = 0.5 * (track_edge + mid);
            const TransitionOutcome o1 = classify_at(q1);
            if (o1 == TransitionOutcome::tracking) track_edge = q1;
            else if (o1 == TransitionOutcome::tipping) { tip_edge = q1; continue; }
            else { bnd_lo = std::min(bnd_lo, q1); bnd_hi = std::max(bnd_hi, q1); }
            const double q2 = 0.5 * (mid + tip_edge);
            const TransitionOutcome o2 = classify_at(q2);
            if (o2 == TransitionOutcome::tipping) tip_edge = q2;
            else if (o2 == TransitionOutcome::tracking) track_edge = q2;
            else { bnd_lo = std::min(bnd_lo, q2); bnd_hi = std::max(bnd_hi, q2); }
            if (std::abs(tip_edge - track_edge) <= 2.0 * tol_lambda) break;
            if (std::isfinite(bnd_lo) && bnd_hi - bnd_lo > 0 &&
                std::min(std::abs(mid - track_edge), std::abs(tip_edge - mid)) < tol_lambda)
                break;  // boundary zone resolved to tolerance
        }
    }

    res.lambda_tilde = 0.5 * (track_edge + tip_edge);
    res.half_width = 0.5 * std::abs(tip_edge - track_edge);
    res.undetermined_width = std::isfinite(bnd_lo) ? (bnd_hi - bnd_lo) : 0.0;
    return res;
}

}  // namespace saddlenode
