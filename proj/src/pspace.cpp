#include "saddlenode/pspace.hpp"

#include <cmath>
#include <stdexcept>

namespace saddlenode {

CompactOpenDistance cp_distance(const TimeSignal& p, const TimeSignal& q,
                                int depth, int samples_per_unit) {
    if (depth < 1) throw std::invalid_argument("cp_distance: depth must be >= 1");
    if (samples_per_unit < 1) throw std::invalid_argument("cp_distance: samples_per_unit must be >= 1");

    const int g = samples_per_unit;
    double running_sup = std::abs(p(0.0) - q(0.0));
    double value = 0.0;
    double weight = 1.0;
    for (int n = 1; n <= depth; ++n) {
        // extend the running sup by the annulus [n-1, n] on both sides
        for (int i = (n == 1 ? 1 : 0); i <= g; ++i) {
            const double u = (double)(n - 1) + (double)i / (double)g;
            running_sup = std::max(running_sup, std::abs(p(u) - q(u)));
            running_sup = std::max(running_sup, std::abs(p(-u) - q(-u)));
        }
        weight *= 0.5;
        value += weight * running_sup / (1.0 + running_sup);
    }
    return {value, std::pow(0.5, depth)};
}

MembershipReport membership_check(const TimeSignal& p, const PSpaceParams& params,
                                  double t0, double t1, int samples_per_unit,
                                  double tol) {
    if (!(t0 < t1)) throw std::invalid_argument("membership_check: need t0 < t1");
    const long n = std::max<long>(2, (long)std::ceil((t1 - t0) * samples_per_unit));
    const double dt = (t1 - t0) / (double)n;

    MembershipReport rep;
    double prev = p(t0);
    rep.sup_abs = std::abs(prev);
    rep.sup_abs_at = t0;
    for (long i = 1; i <= n; ++i) {
        const double t = t0 + (double)i * dt;
        const double v = p(t);
        if (std::abs(v) > rep.sup_abs) {
            rep.sup_abs = std::abs(v);
            rep.sup_abs_at = t;
        }
        const double quot = std::abs(v - prev) / dt;
        if (quot > rep.max_quotient) {
            rep.max_quotient = quot;
            rep.max_quotient_at = t - 0.5 * dt;
        }
        prev = v;
    }
    rep.pass = rep.sup_abs <= params.k1 * (1.0 + 1e-12) + 1e-12 &&
               rep.max_quotient <= params.k2 * (1.0 + tol);
    return rep;
}

}  // namespace saddlenode
