#pragma once

#include "saddlenode/bounded.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace saddlenode {

/// One-parameter family of laws with a declared monotonicity direction:
/// increases_with_lambda means h(t,x,lambda) grows with lambda everywhere
/// relevant, so bounded structure appears for large lambda (and vice versa).
struct ParametricFamily {
    std::function<ScalarField(double)> at;
    bool increases_with_lambda = true;
    double lambda_min = -std::numeric_limits<double>::infinity();
    double lambda_max = std::numeric_limits<double>::infinity();
    std::string name;
    // box on which the monotonicity declaration is sampled by tests
    double check_t_lo = -10, check_t_hi = 10, check_x_lo = -3, check_x_hi = 3;
};

enum class TriState { yes, no, undetermined };

/// Per-lambda diagnostics of a structure probe. `structure` is the
/// existence evidence that drives bisection: escaping pullbacks mean the
/// structure is absent, converged-or-trapped separated estimates mean it is
/// present; the tri-state verdict additionally requires convergence,
/// separation above threshold and hyperbolicity certificates.
struct StructureProbe {
    double lambda = 0.0;
    TriState verdict = TriState::undetermined;
    bool structure = false;
    bool converged = false;
    double sep_upper_lower = 0.0;
    double sep_lower_middle = 0.0;
    double sep_middle_upper = 0.0;
    bool certified = false;
    std::string note;
};

struct StructureOptions {
    double window_lo = -40.0, window_hi = 40.0;
    PullbackOptions pullback;
    CertifyOptions certify;
    double separation_factor = 50.0;  // separated iff sep >= factor*tol
    std::optional<double> x_hi_override, x_lo_override;
    int scan_samples_per_unit = 4;    // t-grid density for the coercivity scan
};

/// Coercivity-derived pullback start levels: the first rung of a
/// multiplicative ladder at which h keeps a definite sign over the window's
/// t-grid (h < 0 above; h < 0 or h > 0 below, concave vs d-concave case),
/// pushed one rung past the structure with a 10% margin.
std::optional<double> coercive_level_above(const ScalarField& field,
                                           double window_lo, double window_hi,
                                           int samples_per_unit);
std::optional<double> coercive_level_below(const ScalarField& field,
                                           double window_lo, double window_hi,
                                           int samples_per_unit, bool want_positive);

/// Two uniformly separated hyperbolic solutions (concave case): yes/no/
/// undetermined with diagnostics. "no" is certified by pullback escape
/// (no bounded solutions at all).
TriState has_two_separated(const ScalarField& field, const StructureOptions& opt,
                           StructureProbe* diag = nullptr);

/// Three uniformly separated hyperbolic solutions (d-concave case). "no"
/// is certified by a merged upper/lower pair or an escaping middle pullback.
TriState has_three_separated(const ScalarField& field, const StructureOptions& opt,
                             StructureProbe* diag = nullptr);

enum class BifurcationKind { single_saddle_node, double_saddle_node };

struct BifurcationResult {
    BifurcationKind kind = BifurcationKind::single_saddle_node;
    double lambda_tilde = 0.0;                  // single
    double lambda_minus = 0.0, lambda_plus = 0.0;  // double
    double half_width = 0.0;                    // bracket half-width (max over sides)
    double undetermined_width = 0.0;            // span of non-yes/non-no probes near the result
    std::vector<StructureProbe> probes;
};

/// Bisection on the two-solution structure between lambda_lo and lambda_hi.
/// The probes must differ at the endpoints (throws std::invalid_argument
/// with both diagnostics otherwise); undetermined probes narrow the bracket
/// through their existence evidence and are reported.
BifurcationResult find_saddle_node(const ParametricFamily& family,
                                   double lambda_lo, double lambda_hi, double tol_lambda,
                                   const StructureOptions& opt = {});

/// Expands outward from lambda_seed (where the three-solution structure must
/// be present) until the structure is lost on each side, then bisects each
/// side. Returns (lambda_minus, lambda_plus).
BifurcationResult find_double_saddle_node(const ParametricFamily& family,
                                          double lambda_seed, double scan_radius,
                                          double tol_lambda,
                                          const StructureOptions& opt = {});

struct CurvePoint {
    double k = 0.0;
    BifurcationResult result;
    bool ok = false;
    bool cold_check_ok = true;  // false if a cold-start cross-check disagreed
    std::string error;
};

struct CurveRequest {
    std::function<ParametricFamily(double)> family_at;
    std::vector<double> k_grid;
    BifurcationKind kind = BifurcationKind::single_saddle_node;
    double lambda_lo = 0.0, lambda_hi = 1.0;  // single: bisection bracket
    double seed = 0.0, radius = 0.5;          // double: expansion seed
    double tol_lambda = 1e-4;
    StructureOptions sopts;
    std::function<StructureOptions(double)> sopts_at;  // optional per-k override
    bool warm_start = true;
    int jobs = 1;
    int cold_checks = 5;
    std::uint64_t cold_check_seed = 20240901u;
};

/// Sweeps the grid; per-point failures are recorded and the sweep continues.
/// Output order is the grid order regardless of scheduling.
std::vector<CurvePoint> trace_curve(const CurveRequest& req);

}  // namespace saddlenode
