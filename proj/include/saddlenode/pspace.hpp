#pragma once

#include "saddlenode/signals.hpp"

namespace saddlenode {

/// Truncated compact-open distance
///   d(p,q) = sum_{n=1}^{depth} 2^-n * s_n/(1+s_n),  s_n = sup_{[-n,n]} |p-q|,
/// with each sup sampled on a uniform grid. tail_bound is the exact bound
/// 2^-depth on the dropped remainder.
struct CompactOpenDistance {
    double value = 0.0;
    double tail_bound = 0.0;
};

CompactOpenDistance cp_distance(const TimeSignal& p, const TimeSignal& q,
                                int depth, int samples_per_unit);

struct MembershipReport {
    bool pass = false;
    double sup_abs = 0.0;        // worst sampled |p|
    double sup_abs_at = 0.0;
    double max_quotient = 0.0;   // worst sampled difference quotient
    double max_quotient_at = 0.0;
};

/// Checks sampled |p| <= k1 and sampled difference quotients <= k2*(1+tol)
/// on [t0,t1]; the worst witnesses are reported either way.
MembershipReport membership_check(const TimeSignal& p, const PSpaceParams& params,
                                  double t0, double t1, int samples_per_unit,
                                  double tol = 1e-9);

/// One interval of the dense-orbit schedule. Block b >= 1 consists of b
/// intervals of length 2b carrying the seeds in order; consecutive intervals
/// are separated by gaps of width 2*k1/k2. The seed graph on [a,b] reproduces
/// the seed on [-half_length, half_length], so shifting the orbit by `center`
/// recovers the seed around 0.
struct OrbitSlot {
    long block = 0;
    int position = 0;       // 0-based within the block
    double a = 0.0;         // interval start
    double b = 0.0;         // interval end
    double center = 0.0;    // a + half_length
    double half_length = 0.0;
};

/// Slot on which seed `seed_index` (1-based) acts within `block`
/// (requires 1 <= seed_index <= block). Pure schedule arithmetic,
/// independent of the actual seed functions.
OrbitSlot dense_orbit_slot(const PSpaceParams& params, int seed_index, long block);

}  // namespace saddlenode
