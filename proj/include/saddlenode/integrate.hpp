#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace saddlenode {

/// Scalar nonautonomous law x' = f(t,x) together with its x-derivatives.
/// fxx may be left empty for laws that are only C^{0,1}.
struct ScalarField {
    std::function<double(double, double)> f;
    std::function<double(double, double)> fx;
    std::function<double(double, double)> fxx;
    double lambda = 0.0;
    std::string name;
};

struct DerivativeCheck {
    bool pass = true;
    double worst_rel_err = 0.0;
    double at_t = 0.0, at_x = 0.0;
    bool checked_second = false;
};

/// Central-difference consistency of fx (and fxx when present) against f on
/// random points of [t_lo,t_hi]x[x_lo,x_hi].
DerivativeCheck check_derivatives(const ScalarField& field,
                                  double t_lo, double t_hi, double x_lo, double x_hi,
                                  int trials, std::uint64_t seed, double rel_tol = 1e-5);

enum class TrajectoryStatus { complete, blowup_plus, blowup_minus };

struct SolveOptions {
    double tol = 1e-8;     // local error per step (abs and rel)
    double x_guard = 1e6;  // |x| crossing this declares blow-up
    double h_init = 0.0;   // 0 = automatic
    long max_steps = 100000000;
};

/// Numerical solution of x' = f(t,x), x(s) = x0, with stored fourth-order
/// dense output on every accepted step. Immutable once returned by solve().
class Trajectory {
public:
    double start_time() const { return t_start_; }
    double end_time() const { return t_end_; }  // escape time when status != complete
    bool forward() const { return forward_; }
    TrajectoryStatus status() const { return status_; }
    double escape_time() const { return t_end_; }

    /// Dense evaluation; throws std::domain_error outside [start,end].
    double operator()(double t) const;

    double front_value() const;
    double back_value() const;  // value at end_time()

    struct Stats {
        long accepted = 0;
        long rejected = 0;
        long rhs_evals = 0;
    };
    const Stats& stats() const { return stats_; }

    struct Step {
        double t0, h;  // signed h
        double c1, c2, c3, c4, c5;
        double eval(double t) const;
    };
    const std::vector<Step>& steps() const { return steps_; }

private:
    friend Trajectory solve(const ScalarField&, double, double, double, const SolveOptions&);
    std::vector<Step> steps_;
    double t_start_ = 0, t_end_ = 0;
    double x_start_ = 0;
    bool forward_ = true;
    TrajectoryStatus status_ = TrajectoryStatus::complete;
    Stats stats_;
};

/// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) with PI step control.
/// Integrates from s to t_end (either direction). Crossing |x| = x_guard ends
/// the run with a blow-up status and the guard-crossing time. Throws
/// std::runtime_error on step-size underflow below 1e-12*max(1,|t_end-s|).
Trajectory solve(const ScalarField& field, double s, double x0, double t_end,
                 const SolveOptions& opt = {});

/// (1/(b-a)) * integral_a^b fx(r, x(r)) dr along the trajectory, using
/// Gauss-Legendre panels on the trajectory's own steps. Throws
/// std::domain_error if [a,b] is not inside the trajectory domain.
double finite_time_lyapunov(const ScalarField& field, const Trajectory& traj,
                            double a, double b);

}  // namespace saddlenode
