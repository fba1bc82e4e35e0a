#include "saddlenode/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace saddlenode {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double initial_step(const std::function<double(double, double)>& f, double t0, double x0,
                    double f0, double dir, double tol, double span) {
    const double sc = tol + tol * std::abs(x0);
    const double d0 = std::abs(x0) / sc;
    const double d1n = std::abs(f0) / sc;
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);
    const double x1 = x0 + dir * h0 * f0;
    const double f1 = f(t0 + dir * h0, x1);
    const double d2 = std::abs(f1 - f0) / sc / h0;
    double h1;
    const double dm = std::max(d1n, d2);
    if (dm <= 1e-15) {
        h1 = std::max(1e-6, h0 * 1e-3);
    } else {
        h1 = std::pow(0.01 / dm, 0.2);
    }
    return std::min({100.0 * h0, h1, span});
}

}  // namespace

double Trajectory::Step::eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return c1 + th * (c2 + th1 * (c3 + th * (c4 + th1 * c5)));
}

double Trajectory::operator()(double t) const {
    const double lo = forward_ ? t_start_ : t_end_;
    const double hi = forward_ ? t_end_ : t_start_;
    const double slack = 1e-9 * std::max(1.0, std::abs(hi - lo));
    if (t < lo - slack || t > hi + slack)
        throw std::domain_error("Trajectory: evaluation outside domain");
    t = std::clamp(t, lo, hi);
    if (steps_.empty()) return x_start_;
    // binary search for the step whose span contains t
    std::size_t a = 0, b = steps_.size() - 1;
    while (a < b) {
        const std::size_t m = (a + b + 1) / 2;
        const bool before = forward_ ? (steps_[m].t0 <= t) : (steps_[m].t0 >= t);
        if (before) a = m; else b = m - 1;
    }
    return steps_[a].eval(t);
}

double Trajectory::front_value() const {
    return steps_.empty() ? x_start_ : steps_.front().eval(t_start_);
}

double Trajectory::back_value() const {
    return steps_.empty() ? x_start_ : steps_.back().eval(t_end_);
}

Trajectory solve(const ScalarField& field, double s, double x0, double t_end,
                 const SolveOptions& opt) {
    if (!field.f) throw std::invalid_argument("solve: field has no law");
    if (!(opt.tol > 0)) throw std::invalid_argument("solve: tol must be > 0");
    if (!(opt.x_guard > std::abs(x0))) throw std::invalid_argument("solve: x_guard must exceed |x0|");

    Trajectory traj;
    traj.t_start_ = s;
    traj.t_end_ = t_end;
    traj.x_start_ = x0;
    traj.forward_ = t_end >= s;
    if (t_end == s) return traj;

    const double dir = traj.forward_ ? 1.0 : -1.0;
    const double span = std::abs(t_end - s);
    const double h_min = 1e-12 * std::max(1.0, span);
    const double atol = opt.tol, rtol = opt.tol;

    const auto& f = field.f;
    double t = s, x = x0;
    double k1 = f(t, x);
    traj.stats_.rhs_evals = 1;

    double h = opt.h_init > 0 ? std::min(opt.h_init, span) : initial_step(f, t, x, k1, dir, opt.tol, span);
    traj.stats_.rhs_evals += (opt.h_init > 0 ? 0 : 1);

    constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    constexpr double fac_shrink = 0.2, fac_grow = 10.0;
    double facold = 1e-4;
    bool last = false;

    while (true) {
        if (traj.stats_.accepted + traj.stats_.rejected > opt.max_steps)
            throw std::runtime_error("solve: step budget exceeded");
        double remaining = std::abs(t_end - t);
        if (h >= remaining) {
            h = remaining;
            last = true;
        }

        const double hs = dir * h;
        const double k2v = f(t + c2 * hs, x + hs * a21 * k1);
        const double k3v = f(t + c3 * hs, x + hs * (a31 * k1 + a32 * k2v));
        const double k4v = f(t + c4 * hs, x + hs * (a41 * k1 + a42 * k2v + a43 * k3v));
        const double k5v = f(t + c5 * hs, x + hs * (a51 * k1 + a52 * k2v + a53 * k3v + a54 * k4v));
        const double k6v = f(t + hs, x + hs * (a61 * k1 + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v));
        const double xn = x + hs * (b1 * k1 + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
        const double k7v = f(t + hs, xn);
        traj.stats_.rhs_evals += 6;

        const double err_raw = hs * (e1 * k1 + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);
        const double sc = atol + rtol * std::max(std::abs(x), std::abs(xn));
        const double err = std::abs(err_raw) / sc;

        if (err <= 1.0 || !(std::isfinite(err))) {
            if (!std::isfinite(xn) || !std::isfinite(err)) {
                // treat a non-finite stage as an overshoot past the guard
                h *= 0.25;
                ++traj.stats_.rejected;
                if (h < h_min) throw std::runtime_error("solve: non-finite state and step underflow");
                last = false;
                continue;
            }
            // accept
            Trajectory::Step st;
            st.t0 = t;
            st.h = hs;
            const double ydiff = xn - x;
            const double bspl = hs * k1 - ydiff;
            st.c1 = x;
            st.c2 = ydiff;
            st.c3 = bspl;
            st.c4 = ydiff - hs * k7v - bspl;
            st.c5 = hs * (d1 * k1 + d3 * k3v + d4 * k4v + d5 * k5v + d6 * k6v + d7 * k7v);
            traj.steps_.push_back(st);
            ++traj.stats_.accepted;

            if (std::abs(xn) >= opt.x_guard) {
                // locate the first guard crossing inside this step
                const double target = (xn > 0 ? opt.x_guard : -opt.x_guard);
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double v = st.eval(t + mid * hs);
                    if ((xn > 0 && v >= target) || (xn < 0 && v <= target)) hi = mid;
                    else lo = mid;
                }
                traj.t_end_ = t + hi * hs;
                traj.status_ = xn > 0 ? TrajectoryStatus::blowup_plus : TrajectoryStatus::blowup_minus;
                return traj;
            }

            t += hs;
            x = xn;
            k1 = k7v;  // FSAL
            if (last) {
                traj.t_end_ = t_end;
                return traj;
            }
            const double fac11 = std::pow(std::max(err, 1e-32), expo1);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(1.0 / fac_grow, std::min(1.0 / fac_shrink, fac / safe));
            h = h / fac;
            facold = std::max(err, 1e-4);
        } else {
            ++traj.stats_.rejected;
            const double fac11 = std::pow(err, expo1);
            h = h / std::min(1.0 / fac_shrink, fac11 / safe);
            last = false;
            if (h < h_min)
                throw std::runtime_error("solve: step size underflow (near-singular field or tol too tight)");
        }
    }
}

double finite_time_lyapunov(const ScalarField& field, const Trajectory& traj,
                            double a, double b) {
    if (!(a < b)) throw std::domain_error("finite_time_lyapunov: need a < b");
    const double lo = traj.forward() ? traj.start_time() : traj.end_time();
    const double hi = traj.forward() ? traj.end_time() : traj.start_time();
    const double slack = 1e-9 * std::max(1.0, hi - lo);
    if (a < lo - slack || b > hi + slack)
        throw std::domain_error("finite_time_lyapunov: interval outside trajectory domain");
    if (!field.fx) throw std::invalid_argument("finite_time_lyapunov: field has no fx");

    // 7-point Gauss-Legendre on each step's overlap with [a,b]
    static const double gx[7] = {0.0, 0.4058451513773972, -0.4058451513773972,
                                 0.7415311855993945, -0.7415311855993945,
                                 0.9491079123427585, -0.9491079123427585};
    static const double gw[7] = {0.4179591836734694, 0.3818300505051189, 0.3818300505051189,
                                 0.2797053914892766, 0.2797053914892766,
                                 0.1294849661688697, 0.1294849661688697};

    double acc = 0.0;
    for (const auto& st : traj.steps()) {
        double s0 = st.t0, s1 = st.t0 + st.h;
        if (s1 < s0) std::swap(s0, s1);
        const double u0 = std::max(s0, a), u1 = std::min(s1, b);
        if (u1 <= u0) continue;
        const double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
        double panel = 0.0;
        for (int i = 0; i < 7; ++i) {
            const double tt = mid + half * gx[i];
            panel += gw[i] * field.fx(tt, st.eval(tt));
        }
        acc += panel * half;
    }
    return acc / (b - a);
}

DerivativeCheck check_derivatives(const ScalarField& field,
                                  double t_lo, double t_hi, double x_lo, double x_hi,
                                  int trials, std::uint64_t seed, double rel_tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(t_lo, t_hi), ux(x_lo, x_hi);
    DerivativeCheck rep;
    rep.checked_second = static_cast<bool>(field.fxx);
    const double span = std::max(1.0, std::abs(x_hi - x_lo));
    for (int i = 0; i < trials; ++i) {
        const double t = ut(rng), x = ux(rng);
        const double h = 1e-5 * span;
        const double fd1 = (field.f(t, x + h) - field.f(t, x - h)) / (2 * h);
        const double v1 = field.fx(t, x);
        const double r1 = std::abs(fd1 - v1) / std::max(1.0, std::abs(v1));
        if (r1 > rep.worst_rel_err) {
            rep.worst_rel_err = r1;
            rep.at_t = t;
            rep.at_x = x;
        }
        if (field.fxx) {
            const double fd2 = (field.fx(t, x + h) - field.fx(t, x - h)) / (2 * h);
            const double v2 = field.fxx(t, x);
            const double r2 = std::abs(fd2 - v2) / std::max(1.0, std::abs(v2));
            if (r2 > rep.worst_rel_err) {
                rep.worst_rel_err = r2;
                rep.at_t = t;
                rep.at_x = x;
            }
        }
    }
    rep.pass = rep.worst_rel_err <= rel_tol;
    return rep;
}

}  // namespace saddlenode
