#include "saddlenode/bounded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saddlenode {

namespace {

Eigen::ArrayXd window_grid(double w0, double w1, int samples_per_unit) {
    const long n = std::max<long>(2, (long)std::ceil((w1 - w0) * samples_per_unit));
    return Eigen::ArrayXd::LinSpaced(n + 1, w0, w1);
}

Eigen::ArrayXd sample_traj(const Trajectory& traj, const Eigen::ArrayXd& ts) {
    Eigen::ArrayXd vs(ts.size());
    for (Eigen::Index i = 0; i < ts.size(); ++i) vs[i] = traj(ts[i]);
    return vs;
}

SolveOptions solver_opts(const PullbackOptions& opt) {
    SolveOptions s;
    s.tol = opt.tol;
    s.x_guard = opt.x_guard;
    return s;
}

// Shared doubling loop. Forward runs start at (anchor - depth, x_start) and
// integrate to window_hi; backward runs start at (anchor + depth, x_start)
// and integrate to window_lo.
BoundedSolutionEstimate pullback_limit(const ScalarField& field, SolutionRole role,
                                       double w0, double w1, double x_start, bool forward_run,
                                       const PullbackOptions& opt) {
    if (!(w0 < w1)) throw std::invalid_argument("pullback: need window_lo < window_hi");
    BoundedSolutionEstimate est;
    est.role = role;
    est.window_lo = w0;
    est.window_hi = w1;
    est.times = window_grid(w0, w1, opt.samples_per_unit);

    const double s0 = opt.initial_depth > 0 ? opt.initial_depth : (w1 - w0);
    Eigen::ArrayXd prev;
    double prev_start = std::numeric_limits<double>::quiet_NaN();
    for (int n = 0; n <= opt.max_doublings; ++n) {
        const double depth = s0 * std::pow(2.0, n);
        double start = forward_run ? w0 - depth : w1 + depth;
        if (forward_run && opt.anchor_limit) start = std::max(start, *opt.anchor_limit);
        const double target = forward_run ? w1 : w0;
        Trajectory run = solve(field, start, x_start, target, solver_opts(opt));
        if (run.status() != TrajectoryStatus::complete) {
            est.exists = false;
            est.converged = false;
            est.escape_sign = run.status() == TrajectoryStatus::blowup_plus ? 1 : -1;
            est.depth_used = depth;
            est.path = std::move(run);
            return est;
        }
        Eigen::ArrayXd cur = sample_traj(run, est.times);
        if (prev.size() > 0) {
            est.residual = (cur - prev).abs().maxCoeff();
            // two converged runs still differ by the integrator's relative
            // error floor, so the target scales with the solution size
            const double floor = opt.tol * (1.0 + cur.abs().maxCoeff());
            if (est.residual < floor || start == prev_start) {
                est.values = std::move(cur);
                est.converged = true;
                est.depth_used = depth;
                est.path = std::move(run);
                return est;
            }
        }
        prev = std::move(cur);
        prev_start = start;
        if (n == opt.max_doublings) {
            est.values = prev;
            est.converged = false;
            est.depth_used = depth;
            est.path = std::move(run);
        }
    }
    return est;  // unconverged after max doublings
}

double interp_samples(const Eigen::ArrayXd& ts, const Eigen::ArrayXd& vs, double t) {
    const Eigen::Index n = ts.size();
    if (t <= ts[0]) return vs[0];
    if (t >= ts[n - 1]) return vs[n - 1];
    const double dt = ts[1] - ts[0];
    Eigen::Index i = std::min<Eigen::Index>(n - 2, (Eigen::Index)((t - ts[0]) / dt));
    while (i + 1 < n - 1 && ts[i + 1] < t) ++i;
    while (i > 0 && ts[i] > t) --i;
    const double th = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return vs[i] * (1 - th) + vs[i + 1] * th;
}

bool path_covers(const Trajectory& path, double a, double b) {
    if (path.steps().empty()) return false;
    const double lo = path.forward() ? path.start_time() : path.end_time();
    const double hi = path.forward() ? path.end_time() : path.start_time();
    const double slack = 1e-9 * std::max(1.0, hi - lo);
    return a >= lo - slack && b <= hi + slack;
}

}  // namespace

double BoundedSolutionEstimate::value_at(double t) const {
    if (path_covers(path, t, t)) return path(t);
    if (times.size() == 0) throw std::domain_error("BoundedSolutionEstimate: empty estimate");
    return interp_samples(times, values, t);
}

BoundedSolutionEstimate upper_bounded(const ScalarField& field,
                                      double window_lo, double window_hi, double x_hi,
                                      const PullbackOptions& opt) {
    return pullback_limit(field, SolutionRole::upper, window_lo, window_hi, x_hi, true, opt);
}

BoundedSolutionEstimate lower_bounded(const ScalarField& field,
                                      double window_lo, double window_hi, double x_lo,
                                      LowerMode mode, const PullbackOptions& opt) {
    return pullback_limit(field, SolutionRole::lower, window_lo, window_hi, x_lo,
                          mode == LowerMode::forward, opt);
}

namespace {

// Forward extensions of a converged estimate beyond its window; bounded
// attractive branches are forward-stable, so direct continuation is safe.
class ForwardExtension {
public:
    ForwardExtension(const ScalarField& field, const BoundedSolutionEstimate& est,
                     const PullbackOptions& opt)
        : field_(field), opt_(opt), t_(est.window_hi), x_(est.value_at(est.window_hi)) {}

    double at(double t) {
        if (t <= t_) return x_;
        Trajectory run = solve(field_, t_, x_, t, solver_opts(opt_));
        if (run.status() != TrajectoryStatus::complete)
            throw std::runtime_error("middle_bounded: bracket extension escaped");
        t_ = t;
        x_ = run.back_value();
        return x_;
    }

private:
    const ScalarField& field_;
    PullbackOptions opt_;
    double t_, x_;
};

BoundedSolutionEstimate middle_backward_pullback(const ScalarField& field,
                                                 const BoundedSolutionEstimate& lower,
                                                 const BoundedSolutionEstimate& upper,
                                                 const PullbackOptions& opt) {
    const double w0 = lower.window_lo, w1 = lower.window_hi;
    BoundedSolutionEstimate est;
    est.role = SolutionRole::middle;
    est.window_lo = w0;
    est.window_hi = w1;
    est.times = window_grid(w0, w1, opt.samples_per_unit);

    ForwardExtension ext_l(field, lower, opt), ext_u(field, upper, opt);
    const double s0 = opt.initial_depth > 0 ? opt.initial_depth : (w1 - w0);
    Eigen::ArrayXd prev;
    for (int n = 0; n <= opt.max_doublings; ++n) {
        const double depth = s0 * std::pow(2.0, n);
        const double start = w1 + depth;
        const double mid = 0.5 * (ext_l.at(start) + ext_u.at(start));
        Trajectory run = solve(field, start, mid, w0, solver_opts(opt));
        if (run.status() != TrajectoryStatus::complete) {
            est.exists = false;
            est.converged = false;
            est.escape_sign = run.status() == TrajectoryStatus::blowup_plus ? 1 : -1;
            est.depth_used = depth;
            est.path = std::move(run);
            return est;
        }
        Eigen::ArrayXd cur = sample_traj(run, est.times);
        if (prev.size() > 0) {
            est.residual = (cur - prev).abs().maxCoeff();
            const double floor = opt.tol * (1.0 + cur.abs().maxCoeff());
            if (est.residual < floor) {
                est.values = std::move(cur);
                est.converged = true;
                est.depth_used = depth;
                est.path = std::move(run);
                return est;
            }
        }
        prev = std::move(cur);
        if (n == opt.max_doublings) {
            est.values = prev;
            est.converged = false;
            est.depth_used = depth;
            est.path = std::move(run);
        }
    }
    return est;
}

BoundedSolutionEstimate middle_basin_bisection(const ScalarField& field,
                                               const BoundedSolutionEstimate& lower,
                                               const BoundedSolutionEstimate& upper,
                                               const PullbackOptions& opt) {
    const double w0 = lower.window_lo, w1 = lower.window_hi;
    const double ext_len = 0.25 * (w1 - w0);
    BoundedSolutionEstimate est;
    est.role = SolutionRole::middle;
    est.window_lo = w0;
    est.window_hi = w1;
    // denser grid: this estimate has no dense path, samples carry it alone
    est.times = window_grid(w0, w1, 4 * opt.samples_per_unit);
    est.values = Eigen::ArrayXd::Zero(est.times.size());

    ForwardExtension ext_l(field, lower, opt), ext_u(field, upper, opt);
    const double t_end = w1 + ext_len;
    const double l_end = ext_l.at(t_end), u_end = ext_u.at(t_end);

    // forward run from (t,x) commits to the upper basin?
    auto goes_up = [&](double t, double x) {
        Trajectory run = solve(field, t, x, t_end, solver_opts(opt));
        if (run.status() == TrajectoryStatus::blowup_plus) return true;
        if (run.status() == TrajectoryStatus::blowup_minus) return false;
        const double v = run.back_value();
        return std::abs(v - u_end) < std::abs(v - l_end);
    };

    double worst_bracket = 0.0;
    Eigen::Index i = 0;
    while (i < est.times.size()) {
        const double t_cur = est.times[i];
        double lo = lower.value_at(t_cur), hi = upper.value_at(t_cur);
        if (goes_up(t_cur, lo + 1e-12) || !goes_up(t_cur, hi - 1e-12))
            throw std::invalid_argument("middle_bounded: basin predicate does not separate");
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, std::abs(hi) + std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (goes_up(t_cur, mid) ? hi : lo) = mid;
        }
        worst_bracket = std::max(worst_bracket, hi - lo);
        const double x_star = 0.5 * (lo + hi);
        // follow forward over one segment; the separatrix value is accurate to
        // the bracket width, so the segment is cut well before departure
        const double seg_end = std::min(w1, t_cur + 0.125 * (w1 - w0));
        Trajectory follow = solve(field, t_cur, x_star, std::max(seg_end, t_cur + 1e-9), solver_opts(opt));
        while (i < est.times.size() && est.times[i] <= seg_end + 1e-12) {
            est.values[i] = follow(std::min(est.times[i], follow.end_time()));
            ++i;
        }
        if (seg_end >= w1) break;
    }
    est.residual = worst_bracket;
    est.converged = true;
    est.depth_used = 0.0;
    return est;
}

}  // namespace

BoundedSolutionEstimate middle_bounded(const ScalarField& field,
                                       const BoundedSolutionEstimate& lower,
                                       const BoundedSolutionEstimate& upper,
                                       MiddleMethod method,
                                       const PullbackOptions& opt) {
    if (std::abs(lower.window_lo - upper.window_lo) > 1e-9 ||
        std::abs(lower.window_hi - upper.window_hi) > 1e-9)
        throw std::invalid_argument("middle_bounded: mismatched windows");
    if (!lower.exists || !upper.exists)
        throw std::invalid_argument("middle_bounded: bracket estimate reports nonexistence");
    const double gap = (upper.values - lower.values).minCoeff();
    if (gap < 10.0 * opt.tol)
        throw std::invalid_argument("middle_bounded: bracket gap below 10*tol, solutions indistinguishable");
    return method == MiddleMethod::backward_pullback
               ? middle_backward_pullback(field, lower, upper, opt)
               : middle_basin_bisection(field, lower, upper, opt);
}

std::optional<HyperbolicityCertificate> certify(const ScalarField& field,
                                                const BoundedSolutionEstimate& estimate,
                                                const CertifyOptions& opt) {
    if (!estimate.exists || estimate.times.size() == 0) return std::nullopt;
    const double w0 = estimate.window_lo, w1 = estimate.window_hi;
    const double span = w1 - w0;

    double gamma;
    if (path_covers(estimate.path, w0, w1)) {
        gamma = finite_time_lyapunov(field, estimate.path, w0, w1);
    } else {
        // trapezoid on the sample grid
        double acc = 0.0;
        for (Eigen::Index i = 0; i + 1 < estimate.times.size(); ++i) {
            const double f0 = field.fx(estimate.times[i], estimate.values[i]);
            const double f1 = field.fx(estimate.times[i + 1], estimate.values[i + 1]);
            acc += 0.5 * (f0 + f1) * (estimate.times[i + 1] - estimate.times[i]);
        }
        gamma = acc / span;
    }

    if (std::abs(gamma) < opt.gamma_min) return std::nullopt;  // hyperbolicity undetermined

    SolveOptions sopt;
    sopt.tol = opt.tol;
    sopt.x_guard = opt.x_guard;
    const double decay_req = std::exp(-0.5 * opt.gamma_min * span);

    auto probes_decay = [&](bool attractive) {
        const double t_from = attractive ? w0 : w1;
        const double t_to = attractive ? w1 : w0;
        const double base_from = estimate.value_at(t_from);
        const double base_to = estimate.value_at(t_to);
        for (const double sgn : {1.0, -1.0}) {
            Trajectory probe = solve(field, t_from, base_from + sgn * opt.rho_probe, t_to, sopt);
            if (probe.status() != TrajectoryStatus::complete) return false;
            const double dev = std::abs(probe.back_value() - base_to);
            if (dev > opt.rho_probe * decay_req + 1e-12) return false;
        }
        return true;
    };

    HyperbolicityCertificate cert;
    cert.exponent = gamma;
    cert.margin = opt.gamma_min;
    cert.window_lo = w0;
    cert.window_hi = w1;
    cert.kind = gamma < 0 ? StabilityKind::attractive : StabilityKind::repulsive;
    cert.probe_decay_ok = probes_decay(cert.kind == StabilityKind::attractive);
    if (!cert.probe_decay_ok) return std::nullopt;  // sign and probes must agree
    return cert;
}

BoundedSolutionEstimate constant_estimate(double value, SolutionRole role,
                                          double window_lo, double window_hi,
                                          int samples_per_unit) {
    BoundedSolutionEstimate est;
    est.role = role;
    est.window_lo = window_lo;
    est.window_hi = window_hi;
    est.times = window_grid(window_lo, window_hi, samples_per_unit);
    est.values = Eigen::ArrayXd::Constant(est.times.size(), value);
    est.residual = 0.0;
    est.converged = true;
    est.exists = true;
    return est;
}

double separation(const BoundedSolutionEstimate& a, const BoundedSolutionEstimate& b) {
    if (std::abs(a.window_lo - b.window_lo) > 1e-9 || std::abs(a.window_hi - b.window_hi) > 1e-9)
        throw std::invalid_argument("separation: mismatched windows");
    if (a.times.size() == b.times.size())
        return (a.values - b.values).abs().minCoeff();
    double m = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.times.size(); ++i)
        m = std::min(m, std::abs(a.values[i] - b.value_at(a.times[i])));
    return m;
}

}  // namespace saddlenode
