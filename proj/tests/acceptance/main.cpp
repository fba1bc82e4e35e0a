// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Optional argv: criterion numbers to run (default all), e.g. ./acceptance 1 4

#include "saddlenode/presets.hpp"
#include "saddlenode/pspace.hpp"

#include "../oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace saddlenode;
using namespace saddlenode::testing;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
    void note(const std::string& s) {
        detail << (detail.str().empty() ? "" : "; ") << s;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

// ---------- criterion 1 ----------
// Boosted population model with the fast blend p_{0.5}: bifurcation value
// 0.11900559 within 1e-3 on the default window [-40,40]; runtime budget
// 10 minutes. The tipping route must agree with the bisection route.
Check criterion1() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    TippingProblem prob = presets::population_transition_problem(0.5);
    const StructureOptions sopts = presets::population_structure_options();
    const double tol = 1e-4;
    const auto sn = find_saddle_node(prob.family, presets::kPopulationLambdaLo,
                                     presets::kPopulationLambdaHi, tol, sopts);
    c.expect(std::abs(sn.lambda_tilde - 0.11900559) <= 1e-3,
             "lambda_tilde=" + fmt(sn.lambda_tilde) + " not within 1e-3 of 0.11900559");

    const auto verdict = [&](double lambda) {
        return classify(prob.family.at(lambda), prob.refs_for(lambda), prob.horizon, prob.copts)
            .outcome;
    };
    c.expect(verdict(0.1185) == TransitionOutcome::tracking, "lambda=0.1185 not tracking");
    c.expect(verdict(0.1195) == TransitionOutcome::tipping, "lambda=0.1195 not tipping");

    const auto tip = find_tipping(prob, 0.118, 0.120, 5e-4);
    c.expect(std::abs(tip.lambda_tilde - sn.lambda_tilde) <= tol + 5e-4 + 1e-4,
             "tipping route " + fmt(tip.lambda_tilde) + " disagrees with bisection route " +
                 fmt(sn.lambda_tilde));

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs <= 600.0, "runtime " + fmt(secs) + "s exceeds 10 min");
    c.note("lambda_tilde=" + fmt(sn.lambda_tilde) + " window=[-40,40] runtime=" + fmt(secs) + "s");
    return c;
}

// ---------- criterion 2 ----------
// Hunting model: tipping value within 1e-3 of 0.350433, tracking at 0.34,
// tipping at 0.36, and tipping persists for larger lambda.
Check criterion2() {
    Check c;
    TippingProblem prob = presets::hunting_transition_problem();
    const auto verdict = [&](double lambda) {
        return classify(prob.family.at(lambda), prob.refs_for(lambda), prob.horizon, prob.copts)
            .outcome;
    };
    c.expect(verdict(0.34) == TransitionOutcome::tracking, "lambda=0.34 not tracking");
    c.expect(verdict(0.36) == TransitionOutcome::tipping, "lambda=0.36 not tipping");

    const auto res = find_tipping(prob, 0.34, 0.36, 1e-4);
    c.expect(std::abs(res.lambda_tilde - 0.350433) <= 1e-3,
             "lambda_c=" + fmt(res.lambda_tilde) + " not within 1e-3 of 0.350433");

    for (double lambda : {0.38, 0.45, 0.55}) {
        c.expect(verdict(lambda) == TransitionOutcome::tipping,
                 "tipping does not persist at lambda=" + fmt(lambda));
    }
    c.note("lambda_c=" + fmt(res.lambda_tilde) + " horizon=" + fmt(prob.horizon));
    return c;
}

// ---------- criterion 3 ----------
// Circuit: three separated hyperbolic solutions at lambda=-0.5, and a double
// saddle-node interval straddling it.
Check criterion3() {
    Check c;
    const StructureOptions sopts = presets::circuit_structure_options();
    const ParametricFamily fam = circuit_family(circuit_default_params(), constant(0.0));
    StructureProbe diag;
    c.expect(has_three_separated(fam.at(-0.5), sopts, &diag) == TriState::yes,
             "has_three_separated != yes at lambda=-0.5 (" + diag.note + ")");

    const auto res = find_double_saddle_node(fam, presets::kCircuitSeed,
                                             presets::kCircuitScanRadius, 1e-3, sopts);
    c.expect(res.lambda_minus < -0.5, "lambda_minus=" + fmt(res.lambda_minus) + " not < -0.5");
    c.expect(res.lambda_plus > -0.5, "lambda_plus=" + fmt(res.lambda_plus) + " not > -0.5");
    c.note("interval=(" + fmt(res.lambda_minus) + ", " + fmt(res.lambda_plus) + ")");
    return c;
}

// ---------- criterion 4 ----------
// Autonomous oracle suite: 20 random cubics against the discriminant system,
// and the quadratic demo to 1e-8.
Check criterion4() {
    Check c;
    StructureOptions opt;
    opt.window_lo = -6;
    opt.window_hi = 6;
    opt.pullback.tol = 1e-9;

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ub(-0.8, 0.8), uc(0.3, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const double b = ub(rng), cc = uc(rng);
        const auto oracle = cubic_saddle_oracle(b, cc);
        const auto res = find_double_saddle_node(
            cubic_test_family(b, cc), 0.5 * (oracle.lambda_minus + oracle.lambda_plus),
            0.2 * (oracle.lambda_plus - oracle.lambda_minus), 5e-7, opt);
        const double err = std::max(std::abs(res.lambda_minus - oracle.lambda_minus),
                                    std::abs(res.lambda_plus - oracle.lambda_plus));
        worst = std::max(worst, err);
        if (err > 1e-6) {
            c.expect(false, "cubic b=" + fmt(b) + " c=" + fmt(cc) + " error " + fmt(err));
            break;
        }
    }
    c.note("worst cubic error=" + fmt(worst));

    StructureOptions qopt = opt;
    qopt.window_lo = -8;
    qopt.window_hi = 8;
    qopt.pullback.tol = 1e-10;
    qopt.pullback.initial_depth = 32.0;
    const auto quad = find_saddle_node(quadratic_demo_family(), -0.5, 0.5, 5e-9, qopt);
    c.expect(std::abs(quad.lambda_tilde) <= 1e-8,
             "quadratic lambda_tilde=" + fmt(quad.lambda_tilde) + " not within 1e-8 of 0");
    c.note("quadratic=" + fmt(quad.lambda_tilde));
    return c;
}

// ---------- criterion 5 ----------
// Monotone chains in lambda: concave pairs on the hunting equation with
// additive forcing, d-concave pairs on the Allee variant.
Check criterion5() {
    Check c;
    PullbackOptions pb;
    pb.tol = 1e-9;
    const double w0 = -20, w1 = 20;

    {  // concave chain: r strictly down, a strictly up
        const auto fam = hunting_concave_family();
        const std::vector<std::pair<double, double>> pairs{
            {0.10, 0.20}, {0.20, 0.30}, {0.30, 0.50}, {0.50, 0.80}, {0.15, 0.45}};
        for (auto [l1, l2] : pairs) {
            const ScalarField f1 = fam.at(l1), f2 = fam.at(l2);
            const auto hi1 = coercive_level_above(f1, w0, w1, 4);
            const auto hi2 = coercive_level_above(f2, w0, w1, 4);
            const auto lo1 = coercive_level_below(f1, w0, w1, 4, false);
            const auto lo2 = coercive_level_below(f2, w0, w1, 4, false);
            if (!hi1 || !hi2 || !lo1 || !lo2) {
                c.expect(false, "coercivity scan failed on the concave chain");
                break;
            }
            const auto a1 = upper_bounded(f1, w0, w1, *hi1, pb);
            const auto a2 = upper_bounded(f2, w0, w1, *hi2, pb);
            const auto r1 = lower_bounded(f1, w0, w1, *lo1, LowerMode::backward, pb);
            const auto r2 = lower_bounded(f2, w0, w1, *lo2, LowerMode::backward, pb);
            if (!(a1.exists && a2.exists && r1.exists && r2.exists)) {
                c.expect(false, "missing structure on the concave chain at (" + fmt(l1) + "," +
                                    fmt(l2) + ")");
                break;
            }
            const double m1 = (r1.values - r2.values).minCoeff();   // r2 < r1
            const double m2 = (a1.values - r1.values).minCoeff();   // r1 <= a1
            const double m3 = (a2.values - a1.values).minCoeff();   // a1 < a2
            c.expect(m1 > 0 && m2 >= 0 && m3 > 0,
                     "concave chain margin violated at (" + fmt(l1) + "," + fmt(l2) + ")");
        }
    }

    {  // d-concave chain: l1 < l2 < m2 < m1 < u1 < u2
        const auto fam = hunting_dconcave_family();
        const std::vector<std::pair<double, double>> pairs{
            {-0.04, -0.02}, {-0.02, 0.0}, {0.0, 0.02}, {0.02, 0.04}, {-0.03, 0.03}};
        for (auto [l1, l2] : pairs) {
            const ScalarField f1 = fam.at(l1), f2 = fam.at(l2);
            auto triple = [&](const ScalarField& f) {
                const auto hi = coercive_level_above(f, w0, w1, 4);
                const auto lo = coercive_level_below(f, w0, w1, 4, true);
                if (!hi || !lo) throw std::runtime_error("coercivity scan failed");
                auto u = upper_bounded(f, w0, w1, *hi, pb);
                auto l = lower_bounded(f, w0, w1, *lo, LowerMode::forward, pb);
                auto m = middle_bounded(f, l, u, MiddleMethod::backward_pullback, pb);
                return std::tuple{l, m, u};
            };
            const auto [low1, mid1, up1] = triple(f1);
            const auto [low2, mid2, up2] = triple(f2);
            const double g1 = (low2.values - low1.values).minCoeff();
            const double g2 = (mid2.values - low2.values).minCoeff();
            const double g3 = (mid1.values - mid2.values).minCoeff();
            const double g4 = (up1.values - mid1.values).minCoeff();
            const double g5 = (up2.values - up1.values).minCoeff();
            c.expect(g1 > 0 && g2 > 0 && g3 > 0 && g4 > 0 && g5 > 0,
                     "d-concave chain margin violated at (" + fmt(l1) + "," + fmt(l2) + ")");
        }
    }
    return c;
}

// ---------- criterion 6 ----------
// Monotonicity of the bifurcation value in the additive forcing p on the
// transient-cubic demo field.
Check criterion6() {
    Check c;
    StructureOptions opt;
    opt.window_lo = -15;
    opt.window_hi = 15;
    opt.x_hi_override = 3.0;  // the cubic transient defeats the upper scan
    const double tol = 1e-4;

    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> uA(0.05, 0.15), uw(0.3, 2.5), uphi(0.0, 6.28),
        uc(0.02, 0.08);
    const PSpaceParams ps{1.0, 1.0};
    double min_margin = 1e9;
    for (int rep = 0; rep < 10; ++rep) {
        const double A = uA(rng), w = std::min(uw(rng), 0.9 / A), phi = uphi(rng);
        const double c1 = uc(rng), c2 = uc(rng);
        const TimeSignal s = harmonic(A, w, phi, Waveform::sine);
        const TimeSignal p1 = scale_add(s, 1.0, -c1);
        const TimeSignal p2 = scale_add(s, 1.0, c2);
        if (!membership_check(p1, ps, -20, 20, 32).pass ||
            !membership_check(p2, ps, -20, 20, 32).pass) {
            c.expect(false, "generated forcing left the function space");
            break;
        }
        const auto r1 = find_saddle_node(transient_cubic_family(p1), -0.6, 0.28, tol, opt);
        const auto r2 = find_saddle_node(transient_cubic_family(p2), -0.6, 0.28, tol, opt);
        min_margin = std::min(min_margin, r1.lambda_tilde - r2.lambda_tilde);
        c.expect(r1.lambda_tilde >= r2.lambda_tilde - 2 * tol,
                 "monotonicity violated: " + fmt(r1.lambda_tilde) + " < " + fmt(r2.lambda_tilde));
    }
    c.note("min margin=" + fmt(min_margin));
    return c;
}

// ---------- criterion 7 ----------
// Devaney construction with five hat seeds, plus the hat-family bifurcation
// curve: monotone toward the constant -1 value, inside the constant bounds.
Check criterion7() {
    Check c;
    const PSpaceParams ps{1.0, 1.0};
    std::vector<TimeSignal> seeds;
    for (int k = 0; k < 5; ++k) seeds.push_back(plateau_hat((double)k));
    const TimeSignal q = dense_orbit(seeds, ps);
    c.expect(membership_check(q, ps, -200, 200, 32).pass, "constructed orbit left the space");
    for (int m = 1; m <= 5; ++m) {
        const auto slot = dense_orbit_slot(ps, m, 5);
        const double d = cp_distance(shift(q, slot.center), seeds[m - 1], 10, 64).value;
        c.expect(d < 0.05, "seed " + std::to_string(m) + " occurrence distance " + fmt(d));
    }

    const double tol = 1e-4;
    CurveRequest req;
    req.family_at = [](double k) {
        return holling_family(holling_quasiperiodic_coefficients(), hat_forcing(k));
    };
    req.kind = BifurcationKind::single_saddle_node;
    req.lambda_lo = presets::kPopulationLambdaLo;
    req.lambda_hi = presets::kPopulationLambdaHi;
    req.tol_lambda = tol;
    req.sopts = presets::population_structure_options();
    req.jobs = 2;
    req.cold_checks = 3;
    for (int k = 0; k <= 40; ++k) req.k_grid.push_back(k);
    const auto pts = trace_curve(req);

    bool all_ok = true;
    for (const auto& pt : pts) all_ok = all_ok && pt.ok && pt.cold_check_ok;
    c.expect(all_ok, "curve sweep had failures");
    if (all_ok) {
        for (std::size_t i = 1; i < pts.size(); ++i) {
            c.expect(pts[i].result.lambda_tilde <= pts[i - 1].result.lambda_tilde + 2 * tol,
                     "curve not monotone at k=" + fmt(pts[i].k));
        }
        const double lam_m1 =
            presets::population_bifurcation(constant(-1.0), false, tol).lambda_tilde;
        const double lam_p1 =
            presets::population_bifurcation(constant(1.0), false, tol).lambda_tilde;
        c.expect(pts.front().result.lambda_tilde <= lam_p1 + 2 * tol,
                 "curve start above the constant +1 value");
        c.expect(pts.back().result.lambda_tilde >= lam_m1 - 2 * tol,
                 "curve tail below the constant -1 value");
        c.note("lambda(k=0)=" + fmt(pts.front().result.lambda_tilde) +
               " lambda(k=40)=" + fmt(pts.back().result.lambda_tilde) +
               " bounds=[" + fmt(lam_m1) + "," + fmt(lam_p1) + "]");
    }
    return c;
}

// ---------- criterion 8 ----------
// Integrator: closed-form checks and the cocycle property.
Check criterion8() {
    Check c;
    SolveOptions opt;
    opt.tol = 1e-8;

    ScalarField decay;
    decay.f = [](double, double x) { return -x; };
    decay.fx = [](double, double) { return -1.0; };
    const auto tr = solve(decay, 0, 1, 1, opt);
    c.expect(std::abs(tr.back_value() - std::exp(-1.0)) <= 10 * opt.tol,
             "exp decay error " + fmt(std::abs(tr.back_value() - std::exp(-1.0))));

    ScalarField square;
    square.f = [](double, double x) { return x * x; };
    square.fx = [](double, double x) { return 2 * x; };
    const auto blow = solve(square, 0, 1, 2, opt);
    c.expect(blow.status() == TrajectoryStatus::blowup_plus, "no blow-up detected for x'=x^2");
    c.expect(std::abs(blow.escape_time() - 1.0) <= 1e-3,
             "escape time " + fmt(blow.escape_time()) + " not within 1e-3 of 1");

    ScalarField forced;
    forced.f = [](double t, double x) { return -x + std::sin(t); };
    forced.fx = [](double, double) { return -1.0; };
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        double a = u(rng), b = u(rng), d = u(rng);
        const double r = std::min({a, b, d}), t = std::max({a, b, d});
        const double s = a + b + d - r - t;
        if (t - r < 1e-3) continue;
        const double x0 = 0.1 * u(rng);
        const double xs = solve(forced, r, x0, s, opt).back_value();
        const double through = solve(forced, s, xs, t, opt).back_value();
        const double direct = solve(forced, r, x0, t, opt).back_value();
        worst = std::max(worst, std::abs(through - direct));
    }
    c.expect(worst <= 100 * opt.tol, "cocycle deviation " + fmt(worst));
    c.note("worst cocycle deviation=" + fmt(worst));
    return c;
}

// ---------- criterion 9 ----------
// Blend-forcing discontinuity: the values along k = 1, 1/2, ..., 2^-8 stay
// bounded away from the k = 0 value.
Check criterion9() {
    Check c;
    const double tol = 1e-5;
    const auto base = presets::population_blend_bifurcation(0.0, tol);
    double min_gap = 1e9;
    for (int e = 0; e <= 8; ++e) {
        const double k = std::pow(0.5, e);
        const auto pt = presets::population_blend_bifurcation(k, tol);
        const double gap = std::abs(pt.lambda - base.lambda);
        min_gap = std::min(min_gap, gap);
        c.expect(gap > 5 * tol, "gap " + fmt(gap) + " at k=" + fmt(k) + " not > " + fmt(5 * tol));
    }
    c.note("lambda(p0)=" + fmt(base.lambda) + " min gap=" + fmt(min_gap));
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* title;
        std::function<Check()> run;
    };
    const std::vector<Entry> entries = {
        {1, "population blend bifurcation value (window [-40,40])", criterion1},
        {2, "hunting critical transition value and verdicts", criterion2},
        {3, "circuit three-solution structure and double saddle-node", criterion3},
        {4, "autonomous oracle suite (20 cubics + quadratic)", criterion4},
        {5, "monotone solution chains in lambda", criterion5},
        {6, "bifurcation value monotone in the forcing", criterion6},
        {7, "dense-orbit construction and hat-family curve", criterion7},
        {8, "integrator closed forms and cocycle", criterion8},
        {9, "blend-forcing discontinuity at k=0", criterion9},
    };

    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& e : entries) {
        if (!wanted.empty() && !wanted.count(e.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Check res;
        try {
            res = e.run();
        } catch (const std::exception& ex) {
            res.ok = false;
            res.detail << "exception: " << ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", res.ok ? "PASS" : "FAIL", e.id,
                    e.title, secs, res.detail.str().empty() ? "" : " -- ",
                    res.detail.str().c_str());
        std::fflush(stdout);
        if (!res.ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures ? 1 : 0;
}
