#include "saddlenode/bifurcate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace saddlenode {

namespace {

enum class LevelSign { negative, positive };

// Start level beyond the bounded structure: the worst-over-t field value must
// keep the required sign, with a relative margin, on every ladder rung from
// the returned level outward. The margin also flags near-zero rungs, which is
// what catches the narrow sign dips of an almost-collided solution pair.
std::optional<double> scan_level(const ScalarField& field, double w0, double w1,
                                 int spu, double direction, LevelSign want) {
    std::vector<double> rungs;
    for (double m = 0.1; m < 8.0; m += 0.1) rungs.push_back(m);
    for (double m = 8.0; m <= 1e7; m *= 1.3) rungs.push_back(m);

    const long nt = std::max<long>(2, (long)std::ceil((w1 - w0) * spu));
    auto clear_of_structure = [&](double m) {
        const double x = direction * m;
        const double margin = 0.03 * (1.0 + m);
        for (long i = 0; i <= nt; ++i) {
            const double t = w0 + (w1 - w0) * (double)i / (double)nt;
            const double v = field.f(t, x);
            if (want == LevelSign::negative ? (v >= -margin) : (v <= margin)) return false;
        }
        return true;
    };

    long last_violation = -1;
    for (std::size_t j = 0; j < rungs.size(); ++j)
        if (!clear_of_structure(rungs[j])) last_violation = (long)j;
    const std::size_t next = (std::size_t)(last_violation + 1);
    if (next >= rungs.size()) return std::nullopt;
    return direction * (rungs[next] * 1.1 + 0.25);
}

}  // namespace

std::optional<double> coercive_level_above(const ScalarField& field,
                                           double window_lo, double window_hi,
                                           int samples_per_unit) {
    return scan_level(field, window_lo, window_hi, samples_per_unit, +1.0, LevelSign::negative);
}

std::optional<double> coercive_level_below(const ScalarField& field,
                                           double window_lo, double window_hi,
                                           int samples_per_unit, bool want_positive) {
    return scan_level(field, window_lo, window_hi, samples_per_unit, -1.0,
                      want_positive ? LevelSign::positive : LevelSign::negative);
}

namespace {

double start_above(const ScalarField& field, const StructureOptions& opt) {
    if (opt.x_hi_override) return *opt.x_hi_override;
    auto lvl = coercive_level_above(field, opt.window_lo, opt.window_hi, opt.scan_samples_per_unit);
    if (!lvl)
        throw std::invalid_argument(
            "coercivity scan found no sign-definite level above; pass x_hi explicitly");
    return *lvl;
}

double start_below(const ScalarField& field, const StructureOptions& opt, LevelSign want) {
    if (opt.x_lo_override) return *opt.x_lo_override;
    auto lvl = scan_level(field, opt.window_lo, opt.window_hi, opt.scan_samples_per_unit,
                          -1.0, want);
    if (!lvl)
        throw std::invalid_argument(
            "coercivity scan found no sign-definite level below; pass x_lo explicitly");
    return *lvl;
}

}  // namespace

TriState has_two_separated(const ScalarField& field, const StructureOptions& opt,
                           StructureProbe* diag) {
    StructureProbe probe;
    probe.lambda = field.lambda;
    auto done = [&](TriState v) {
        probe.verdict = v;
        if (diag) *diag = probe;
        return v;
    };

    const double x_hi = start_above(field, opt);
    const double x_lo = start_below(field, opt, LevelSign::negative);

    auto upper = upper_bounded(field, opt.window_lo, opt.window_hi, x_hi, opt.pullback);
    if (!upper.exists) {
        if (upper.escape_sign > 0)
            throw std::runtime_error("has_two_separated: upper pullback escaped upward (bad x_hi)");
        probe.note = "upper pullback escaped: no bounded solutions";
        return done(TriState::no);
    }
    auto lower = lower_bounded(field, opt.window_lo, opt.window_hi, x_lo,
                               LowerMode::backward, opt.pullback);
    if (!lower.exists) {
        probe.note = "lower backward pullback escaped: no bounded solutions";
        return done(TriState::no);
    }

    probe.structure = true;
    probe.converged = upper.converged && lower.converged;
    probe.sep_upper_lower = separation(upper, lower);
    const double thresh = opt.separation_factor * opt.pullback.tol;
    if (probe.sep_upper_lower < thresh) {
        probe.note = "upper/lower not separated";
        return done(TriState::undetermined);
    }
    if (!probe.converged) {
        probe.note = "pullback unconverged";
        return done(TriState::undetermined);
    }

    auto cu = certify(field, upper, opt.certify);
    auto cl = certify(field, lower, opt.certify);
    probe.certified = cu && cl && cu->kind == StabilityKind::attractive &&
                      cl->kind == StabilityKind::repulsive;
    if (!probe.certified) {
        probe.note = "hyperbolicity undetermined";
        return done(TriState::undetermined);
    }
    return done(TriState::yes);
}

TriState has_three_separated(const ScalarField& field, const StructureOptions& opt,
                             StructureProbe* diag) {
    StructureProbe probe;
    probe.lambda = field.lambda;
    auto done = [&](TriState v) {
        probe.verdict = v;
        if (diag) *diag = probe;
        return v;
    };

    const double x_hi = start_above(field, opt);
    const double x_lo = start_below(field, opt, LevelSign::positive);

    auto upper = upper_bounded(field, opt.window_lo, opt.window_hi, x_hi, opt.pullback);
    if (!upper.exists) {
        probe.note = "upper pullback escaped";
        return done(TriState::no);
    }
    auto lower = lower_bounded(field, opt.window_lo, opt.window_hi, x_lo,
                               LowerMode::forward, opt.pullback);
    if (!lower.exists) {
        probe.note = "lower pullback escaped";
        return done(TriState::no);
    }

    const double thresh = opt.separation_factor * opt.pullback.tol;
    probe.sep_upper_lower = separation(upper, lower);
    if (probe.sep_upper_lower < thresh) {
        probe.note = "upper and lower merged";
        return done(TriState::no);
    }

    auto middle = middle_bounded(field, lower, upper, MiddleMethod::backward_pullback, opt.pullback);
    if (!middle.exists) {
        probe.note = "middle backward pullback escaped: no interior repulsive solution";
        return done(TriState::no);
    }

    probe.structure = true;
    probe.converged = upper.converged && lower.converged && middle.converged;
    probe.sep_lower_middle = separation(lower, middle);
    probe.sep_middle_upper = separation(middle, upper);
    if (probe.sep_lower_middle < thresh || probe.sep_middle_upper < thresh) {
        probe.structure = false;  // fewer than three separated solutions
        probe.note = "middle within threshold of an extremal solution";
        return done(TriState::undetermined);
    }
    if (!probe.converged) {
        probe.note = "pullback unconverged";
        return done(TriState::undetermined);
    }

    auto cu = certify(field, upper, opt.certify);
    auto cm = certify(field, middle, opt.certify);
    auto cl = certify(field, lower, opt.certify);
    probe.certified = cu && cm && cl && cu->kind == StabilityKind::attractive &&
                      cm->kind == StabilityKind::repulsive &&
                      cl->kind == StabilityKind::attractive;
    if (!probe.certified) {
        probe.note = "hyperbolicity undetermined";
        return done(TriState::undetermined);
    }
    return done(TriState::yes);
}

namespace {

StructureProbe run_probe(const ParametricFamily& family, double lambda,
                         const StructureOptions& opt, BifurcationKind kind) {
    StructureProbe p;
    if (kind == BifurcationKind::single_saddle_node)
        has_two_separated(family.at(lambda), opt, &p);
    else
        has_three_separated(family.at(lambda), opt, &p);
    return p;
}

std::string describe_probe(const StructureProbe& p) {
    std::ostringstream os;
    os << "lambda=" << p.lambda
       << " verdict=" << (p.verdict == TriState::yes ? "yes" : p.verdict == TriState::no ? "no" : "undetermined")
       << " structure=" << (p.structure ? "present" : "absent");
    if (!p.note.empty()) os << " (" << p.note << ")";
    return os.str();
}

// width of the lambda-zone between the closest certified-yes and certified-no
// probes; 0 when the bisection never saw an undetermined verdict between them
double undetermined_span(const std::vector<StructureProbe>& probes, double at) {
    double yes_best = std::numeric_limits<double>::quiet_NaN();
    double no_best = std::numeric_limits<double>::quiet_NaN();
    bool saw_und = false;
    for (const auto& p : probes) {
        if (p.verdict == TriState::yes &&
            (!std::isfinite(yes_best) || std::abs(p.lambda - at) < std::abs(yes_best - at)))
            yes_best = p.lambda;
        if (p.verdict == TriState::no &&
            (!std::isfinite(no_best) || std::abs(p.lambda - at) < std::abs(no_best - at)))
            no_best = p.lambda;
        if (p.verdict == TriState::undetermined) saw_und = true;
    }
    if (!saw_und) return 0.0;
    if (std::isfinite(yes_best) && std::isfinite(no_best)) return std::abs(yes_best - no_best);
    return std::numeric_limits<double>::quiet_NaN();
}

// bisection on structure evidence; lam_with has it, lam_without does not
double bisect_structure(const ParametricFamily& family, double lam_with, double lam_without,
                        double tol_lambda, const StructureOptions& opt, BifurcationKind kind,
                        std::vector<StructureProbe>& probes) {
    while (std::abs(lam_with - lam_without) > 2.0 * tol_lambda) {
        const double mid = 0.5 * (lam_with + lam_without);
        StructureProbe p = run_probe(family, mid, opt, kind);
        probes.push_back(p);
        (p.structure ? lam_with : lam_without) = mid;
    }
    return 0.5 * (lam_with + lam_without);
}

}  // namespace

BifurcationResult find_saddle_node(const ParametricFamily& family,
                                   double lambda_lo, double lambda_hi, double tol_lambda,
                                   const StructureOptions& opt) {
    if (!(lambda_lo < lambda_hi)) throw std::invalid_argument("find_saddle_node: bad bracket");
    BifurcationResult res;
    res.kind = BifurcationKind::single_saddle_node;

    StructureProbe p_lo = run_probe(family, lambda_lo, opt, res.kind);
    StructureProbe p_hi = run_probe(family, lambda_hi, opt, res.kind);
    res.probes.push_back(p_lo);
    res.probes.push_back(p_hi);
    if (p_lo.structure == p_hi.structure) {
        throw std::invalid_argument("find_saddle_node: predicate equal at both endpoints: [" +
                                    describe_probe(p_lo) + "] vs [" + describe_probe(p_hi) + "]");
    }
    double lam_with = p_lo.structure ? lambda_lo : lambda_hi;
    double lam_without = p_lo.structure ? lambda_hi : lambda_lo;
    res.lambda_tilde =
        bisect_structure(family, lam_with, lam_without, tol_lambda, opt, res.kind, res.probes);
    res.half_width = tol_lambda;
    res.undetermined_width = undetermined_span(res.probes, res.lambda_tilde);
    return res;
}

BifurcationResult find_double_saddle_node(const ParametricFamily& family,
                                          double lambda_seed, double scan_radius,
                                          double tol_lambda,
                                          const StructureOptions& opt) {
    if (!(scan_radius > 0)) throw std::invalid_argument("find_double_saddle_node: bad radius");
    BifurcationResult res;
    res.kind = BifurcationKind::double_saddle_node;

    StructureProbe seed_probe = run_probe(family, lambda_seed, opt, res.kind);
    res.probes.push_back(seed_probe);
    if (seed_probe.verdict != TriState::yes) {
        throw std::invalid_argument(
            "find_double_saddle_node: three-solution structure not certified at the seed: [" +
            describe_probe(seed_probe) + "]");
    }

    double sides[2];
    for (int si = 0; si < 2; ++si) {
        const double dir = si == 0 ? -1.0 : 1.0;
        double lam_in = lambda_seed;
        double lam_out = std::numeric_limits<double>::quiet_NaN();
        double step = scan_radius;
        for (int i = 0; i < 60; ++i) {
            double lam_try = lambda_seed + dir * step;
            lam_try = std::clamp(lam_try, family.lambda_min, family.lambda_max);
            StructureProbe p = run_probe(family, lam_try, opt, res.kind);
            res.probes.push_back(p);
            if (p.structure) {
                lam_in = lam_try;
                if (lam_try == family.lambda_min || lam_try == family.lambda_max)
                    throw std::runtime_error(
                        "find_double_saddle_node: structure persists to the family range edge");
                step *= 2.0;
            } else {
                lam_out = lam_try;
                break;
            }
        }
        if (!std::isfinite(lam_out))
            throw std::runtime_error("find_double_saddle_node: no structure loss found while expanding");
        sides[si] = bisect_structure(family, lam_in, lam_out, tol_lambda, opt, res.kind, res.probes);
    }
    res.lambda_minus = sides[0];
    res.lambda_plus = sides[1];
    res.half_width = tol_lambda;
    res.undetermined_width =
        std::max(undetermined_span(res.probes, res.lambda_minus),
                 undetermined_span(res.probes, res.lambda_plus));
    return res;
}

namespace {

CurvePoint trace_point(const CurveRequest& req, double k,
                       const BifurcationResult* warm) {
    CurvePoint pt;
    pt.k = k;
    const StructureOptions sopts = req.sopts_at ? req.sopts_at(k) : req.sopts;
    try {
        ParametricFamily fam = req.family_at(k);
        if (req.kind == BifurcationKind::single_saddle_node) {
            if (warm) {
                const double d = std::max(64.0 * req.tol_lambda,
                                          0.125 * (req.lambda_hi - req.lambda_lo));
                const double lo = std::max(req.lambda_lo, warm->lambda_tilde - d);
                const double hi = std::min(req.lambda_hi, warm->lambda_tilde + d);
                try {
                    pt.result = find_saddle_node(fam, lo, hi, req.tol_lambda, sopts);
                    pt.ok = true;
                    return pt;
                } catch (const std::invalid_argument&) {
                    // warm bracket missed; fall through to the cold bracket
                }
            }
            pt.result = find_saddle_node(fam, req.lambda_lo, req.lambda_hi, req.tol_lambda, sopts);
        } else {
            double seed = req.seed, radius = req.radius;
            if (warm) {
                seed = 0.5 * (warm->lambda_minus + warm->lambda_plus);
                radius = std::max(16.0 * req.tol_lambda,
                                  0.25 * (warm->lambda_plus - warm->lambda_minus));
            }
            pt.result = find_double_saddle_node(fam, seed, radius, req.tol_lambda, sopts);
        }
        pt.ok = true;
    } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
    }
    return pt;
}

bool results_close(const CurvePoint& a, const CurvePoint& b, double tol) {
    if (a.ok != b.ok) return false;
    if (!a.ok) return true;
    if (a.result.kind == BifurcationKind::single_saddle_node)
        return std::abs(a.result.lambda_tilde - b.result.lambda_tilde) <= tol;
    return std::abs(a.result.lambda_minus - b.result.lambda_minus) <= tol &&
           std::abs(a.result.lambda_plus - b.result.lambda_plus) <= tol;
}

}  // namespace

std::vector<CurvePoint> trace_curve(const CurveRequest& req) {
    std::vector<CurvePoint> out(req.k_grid.size());
    if (req.k_grid.empty()) return out;

    // the cold pilot point seeds every warm start, so the scheduling order
    // (and hence the jobs count) cannot affect any result
    out[0] = trace_point(req, req.k_grid[0], nullptr);
    const BifurcationResult* pilot = out[0].ok ? &out[0].result : nullptr;

    const int jobs = std::max(1, req.jobs);
    if (jobs == 1 || req.k_grid.size() <= 2) {
        for (std::size_t i = 1; i < req.k_grid.size(); ++i) {
            out[i] = trace_point(req, req.k_grid[i], req.warm_start ? pilot : nullptr);
        }
    } else {
        std::atomic<std::size_t> next{1};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= req.k_grid.size()) break;
                out[i] = trace_point(req, req.k_grid[i], req.warm_start ? pilot : nullptr);
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // cold-start cross-check on a few random grid points
    if (req.warm_start && req.cold_checks > 0 && req.k_grid.size() > 1) {
        std::mt19937_64 rng(req.cold_check_seed);
        std::vector<std::size_t> idx;
        for (std::size_t i = 1; i < req.k_grid.size(); ++i)
            if (out[i].ok) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng);
        const std::size_t n = std::min<std::size_t>(idx.size(), (std::size_t)req.cold_checks);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t i = idx[j];
            CurvePoint cold = trace_point(req, req.k_grid[i], nullptr);
            if (!results_close(out[i], cold, 2.0 * req.tol_lambda)) out[i].cold_check_ok = false;
        }
    }
    return out;
}

}  // namespace saddlenode
