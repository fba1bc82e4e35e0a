#include "saddlenode/config.hpp"
#include "saddlenode/io.hpp"
#include "saddlenode/presets.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

using namespace saddlenode;
using config::json;

namespace {

constexpr const char* kUsage = R"(saddlenode <command> [flags]

commands:
  signal     evaluate a signal expression to CSV (t, value)
  solve      integrate one initial value problem
  bounded    estimate bounded solutions with hyperbolicity certificates
  bifurcate  locate a single or double saddle-node value by bisection
  curve      trace a bifurcation curve over a k-grid of forcings
  classify   classify a transition as tracking / tipping / boundary
  tip        locate a tipping value by bisection on the verdict
  reproduce  run a canned simulation: fig1 fig2 fig3 fig5 fig6 sec42

flags:
  --config PATH         JSON config; command line overrides it
  --out DIR             output directory (default: out)
  --format csv|json|svg emit an SVG chart in addition to CSV/JSON when =svg
  --jobs N              worker threads for sweeps (env SADDLENODE_JOBS)
  --tol X               integration/pullback tolerance   (default 1e-8)
  --tol-lambda X        bisection tolerance on lambda    (default 1e-4)
  --window A:B          estimation window                (default -40:40)
  --lambda X | LO:HI    parameter value or bracket
  --k LO:HI:STEP        forcing grid for curve sweeps
  --model NAME          quadratic-demo cubic-demo hunting-concave
                        hunting-dconcave hunting-predation holling
                        holling-boosted circuit transient-cubic
  --forcing KIND:ARG    hat:K slow-blend:K fast-blend:K positive-blend:K const:V
  --preset NAME         fig1 fig2 fig3 fig5 fig6 sec42
  --from S --x0 X --to T --stride DT   (solve)
  --seed L --radius R --double         (bifurcate)
  --horizon T                          (classify, tip)
  --samples-per-unit N                 (signal)
)";

struct Cli {
    std::string command;
    std::map<std::string, std::string> opts;
    json doc;  // original config document (for nested "signal")
};

const std::set<std::string> kKnownKeys = {
    "config", "out", "format", "jobs", "tol", "tol-lambda", "window", "lambda", "k",
    "model", "forcing", "preset", "from", "x0", "to", "stride", "seed", "radius",
    "double", "horizon", "samples-per-unit", "target", "signal", "command"};

[[noreturn]] void usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n\n" << kUsage;
    std::exit(2);
}

Cli parse_cli(int argc, char** argv) {
    Cli cli;
    std::vector<std::string> positional;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) == 0) {
            std::string key = arg.substr(2);
            std::string val = "true";
            const auto eq = key.find('=');
            if (eq != std::string::npos) {
                val = key.substr(eq + 1);
                key = key.substr(0, eq);
            } else if (key != "double" && i + 1 < argc) {
                val = argv[++i];
            }
            if (!kKnownKeys.count(key)) usage_error("unknown flag --" + key);
            cli.opts[key] = val;
        } else {
            positional.push_back(arg);
        }
    }
    if (!positional.empty()) cli.command = positional[0];
    if (positional.size() > 1) cli.opts["target"] = positional[1];
    if (positional.size() > 2) usage_error("too many positional arguments");

    if (cli.opts.count("config")) {
        std::ifstream in(cli.opts["config"]);
        if (!in) usage_error("cannot read config file " + cli.opts["config"]);
        try {
            cli.doc = json::parse(in);
        } catch (const std::exception& e) {
            usage_error(std::string("config parse failure: ") + e.what());
        }
        if (!cli.doc.is_object()) usage_error("config must be a JSON object");
        for (auto it = cli.doc.begin(); it != cli.doc.end(); ++it) {
            if (!kKnownKeys.count(it.key()))
                usage_error("unknown config key '" + it.key() + "'");
            if (it.key() == "signal") continue;  // nested expression, kept in doc
            std::string sval;
            if (it.value().is_string()) sval = it.value().get<std::string>();
            else sval = it.value().dump();
            if (it.key() == "command") {
                if (cli.command.empty()) cli.command = sval;
            } else if (!cli.opts.count(it.key())) {
                cli.opts[it.key()] = sval;  // command line wins
            }
        }
    }
    if (cli.command.empty()) usage_error("no command given");
    if (!cli.opts.count("jobs")) {
        if (const char* env = std::getenv("SADDLENODE_JOBS")) cli.opts["jobs"] = env;
    }
    return cli;
}

json resolved_config(const Cli& cli) {
    json j;
    j["command"] = cli.command;
    for (const auto& [k, v] : cli.opts)
        if (k != "config") j[k] = v;
    if (cli.doc.contains("signal")) j["signal"] = cli.doc["signal"];
    return j;
}

double opt_num(const Cli& cli, const std::string& key, double dflt) {
    auto it = cli.opts.find(key);
    if (it == cli.opts.end()) return dflt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        usage_error("flag --" + key + " expects a number, got '" + it->second + "'");
    }
}

std::string opt_str(const Cli& cli, const std::string& key, const std::string& dflt) {
    auto it = cli.opts.find(key);
    return it == cli.opts.end() ? dflt : it->second;
}

std::vector<double> split_nums(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("trailing");
        } catch (...) {
            usage_error("expected a number, got '" + item + "'");
        }
    }
    return out;
}

std::pair<double, double> opt_window(const Cli& cli) {
    const std::string w = opt_str(cli, "window", "-40:40");
    auto v = split_nums(w, ':');
    if (v.size() != 2 || !(v[0] < v[1])) usage_error("--window expects A:B with A < B");
    return {v[0], v[1]};
}

TimeSignal parse_forcing(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const double arg = colon == std::string::npos ? 0.0 : std::stod(spec.substr(colon + 1));
    if (kind == "hat") return hat_forcing(arg);
    if (kind == "slow-blend") return slow_blend_forcing(arg);
    if (kind == "fast-blend") return fast_blend_forcing(arg);
    if (kind == "positive-blend") return positive_blend_forcing(arg);
    if (kind == "const") return constant(arg);
    usage_error("unknown forcing '" + spec + "'");
}

ParametricFamily build_family(const Cli& cli) {
    const std::string model = opt_str(cli, "model", "");
    if (model.empty()) usage_error("this command needs --model");
    const std::string forcing = opt_str(cli, "forcing", "");
    auto p = [&](const char* dflt) { return parse_forcing(forcing.empty() ? dflt : forcing); };
    if (model == "quadratic-demo") return quadratic_demo_family();
    if (model == "cubic-demo") return cubic_demo_family();
    if (model == "hunting-concave") return hunting_concave_family();
    if (model == "hunting-dconcave") return hunting_dconcave_family();
    if (model == "hunting-predation") return hunting_predation_family();
    if (model == "holling")
        return holling_family(holling_quasiperiodic_coefficients(), p("const:0"));
    if (model == "holling-boosted")
        return holling_family(holling_boosted_coefficients(), p("const:0"));
    if (model == "circuit") return circuit_family(circuit_default_params(), p("const:0"));
    if (model == "transient-cubic") return transient_cubic_family(p("const:0"));
    usage_error("unknown model '" + model + "'");
}

StructureOptions build_structure_options(const Cli& cli) {
    StructureOptions opt;
    auto [w0, w1] = opt_window(cli);
    opt.window_lo = w0;
    opt.window_hi = w1;
    opt.pullback.tol = opt_num(cli, "tol", 1e-8);
    opt.certify.tol = opt.pullback.tol;
    return opt;
}

json certificate_json(const std::optional<HyperbolicityCertificate>& c) {
    if (!c) return nullptr;
    json j;
    j["exponent"] = c->exponent;
    j["kind"] = c->kind == StabilityKind::attractive ? "attractive" : "repulsive";
    j["margin"] = c->margin;
    return j;
}

json estimate_json(const BoundedSolutionEstimate& e) {
    json j;
    j["exists"] = e.exists;
    j["converged"] = e.converged;
    j["residual"] = e.residual;
    j["depth"] = e.depth_used;
    j["certificate"] = certificate_json(e.certificate);
    return j;
}

json probes_json(const std::vector<StructureProbe>& probes) {
    json arr = json::array();
    for (const auto& p : probes) {
        json j;
        j["lambda"] = p.lambda;
        j["verdict"] = p.verdict == TriState::yes ? "yes"
                       : p.verdict == TriState::no ? "no" : "undetermined";
        j["structure"] = p.structure;
        if (p.sep_upper_lower > 0) j["sep_upper_lower"] = p.sep_upper_lower;
        if (!p.note.empty()) j["note"] = p.note;
        arr.push_back(j);
    }
    return arr;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

std::string outdir(const Cli& cli) {
    const std::string dir = opt_str(cli, "out", "out");
    io::ensure_directory(dir);
    return dir;
}

// ---- commands ----

int cmd_signal(const Cli& cli) {
    if (!cli.doc.contains("signal"))
        usage_error("signal: provide --config with a nested \"signal\" expression");
    const TimeSignal s = config::signal_from_json(cli.doc["signal"]);
    auto [w0, w1] = opt_window(cli);
    const int spu = (int)opt_num(cli, "samples-per-unit", 64);
    const std::string dir = outdir(cli);

    std::vector<std::vector<std::string>> rows;
    const long n = std::max<long>(2, (long)std::ceil((w1 - w0) * spu));
    for (long i = 0; i <= n; ++i) {
        const double t = w0 + (w1 - w0) * (double)i / (double)n;
        rows.push_back({io::fmt(t), io::fmt(s(t))});
    }
    io::write_csv(dir + "/signal.csv", {"t", "value"}, rows);

    json j;
    j["config"] = resolved_config(cli);
    j["samples"] = n + 1;
    j["signal"] = config::signal_to_json(s);
    write_json(dir + "/signal.json", j);
    std::cout << "wrote " << dir << "/signal.csv (" << n + 1 << " samples)\n";
    return 0;
}

int cmd_solve(const Cli& cli) {
    ParametricFamily fam = build_family(cli);
    const double lambda = opt_num(cli, "lambda", 0.0);
    const ScalarField field = fam.at(lambda);
    const double s = opt_num(cli, "from", 0.0);
    const double x0 = opt_num(cli, "x0", 1.0);
    const double t_end = opt_num(cli, "to", 10.0);
    SolveOptions sopt;
    sopt.tol = opt_num(cli, "tol", 1e-8);
    const Trajectory traj = solve(field, s, x0, t_end, sopt);
    const std::string dir = outdir(cli);

    const double stride = opt_num(cli, "stride", std::abs(t_end - s) / 500.0);
    std::vector<std::vector<std::string>> rows;
    const double dirn = t_end >= s ? 1.0 : -1.0;
    for (double t = s;; t += dirn * stride) {
        const bool past = dirn > 0 ? t >= traj.end_time() : t <= traj.end_time();
        const double tc = past ? traj.end_time() : t;
        rows.push_back({io::fmt(tc), io::fmt(traj(tc))});
        if (past) break;
    }
    io::write_csv(dir + "/solution.csv", {"t", "x"}, rows);

    json j;
    j["config"] = resolved_config(cli);
    j["status"] = traj.status() == TrajectoryStatus::complete ? "complete"
                  : traj.status() == TrajectoryStatus::blowup_plus ? "blowup_plus"
                                                                   : "blowup_minus";
    if (traj.status() != TrajectoryStatus::complete) j["escape_time"] = traj.escape_time();
    j["steps_accepted"] = traj.stats().accepted;
    j["steps_rejected"] = traj.stats().rejected;
    j["rhs_evals"] = traj.stats().rhs_evals;
    write_json(dir + "/solve.json", j);
    std::cout << "status: " << j["status"].get<std::string>() << ", "
              << traj.stats().accepted << " steps\n";
    return 0;
}

int cmd_bounded(const Cli& cli) {
    ParametricFamily fam = build_family(cli);
    const double lambda = opt_num(cli, "lambda", 0.0);
    const ScalarField field = fam.at(lambda);
    StructureOptions opt = build_structure_options(cli);
    const std::string dir = outdir(cli);
    const bool dconcave = static_cast<bool>(field.fxx);

    auto x_hi = coercive_level_above(field, opt.window_lo, opt.window_hi, 4);
    auto x_lo = coercive_level_below(field, opt.window_lo, opt.window_hi, 4, dconcave);
    if (!x_hi || !x_lo) throw std::runtime_error("bounded: coercivity scan failed");

    auto upper = upper_bounded(field, opt.window_lo, opt.window_hi, *x_hi, opt.pullback);
    auto lower = lower_bounded(field, opt.window_lo, opt.window_hi, *x_lo,
                               dconcave ? LowerMode::forward : LowerMode::backward, opt.pullback);
    upper.certificate = upper.exists ? certify(field, upper, opt.certify) : std::nullopt;
    lower.certificate = lower.exists ? certify(field, lower, opt.certify) : std::nullopt;

    std::optional<BoundedSolutionEstimate> middle;
    if (dconcave && upper.exists && lower.exists &&
        separation(upper, lower) > 10 * opt.pullback.tol) {
        middle = middle_bounded(field, lower, upper, MiddleMethod::backward_pullback, opt.pullback);
        if (middle->exists) middle->certificate = certify(field, *middle, opt.certify);
    }

    auto dump = [&](const BoundedSolutionEstimate& e, const std::string& role) {
        if (!e.exists) return;
        std::vector<std::vector<std::string>> rows;
        for (Eigen::Index i = 0; i < e.times.size(); ++i)
            rows.push_back({io::fmt(e.times[i]), io::fmt(e.values[i])});
        io::write_csv(dir + "/bounded_" + role + ".csv", {"t", "x"}, rows);
    };
    dump(lower, "lower");
    if (middle) dump(*middle, "middle");
    dump(upper, "upper");

    json j;
    j["config"] = resolved_config(cli);
    j["upper"] = estimate_json(upper);
    j["lower"] = estimate_json(lower);
    if (middle) j["middle"] = estimate_json(*middle);
    if (upper.exists && lower.exists) {
        j["separation_upper_lower"] = separation(upper, lower);
        if (middle && middle->exists) {
            j["separation_lower_middle"] = separation(lower, *middle);
            j["separation_middle_upper"] = separation(*middle, upper);
        }
    }
    write_json(dir + "/bounded.json", j);
    std::cout << "wrote " << dir << "/bounded.json\n";
    return 0;
}

int cmd_bifurcate(const Cli& cli) {
    ParametricFamily fam = build_family(cli);
    StructureOptions opt = build_structure_options(cli);
    const double tol_lambda = opt_num(cli, "tol-lambda", 1e-4);
    const std::string dir = outdir(cli);

    BifurcationResult res;
    if (cli.opts.count("double")) {
        const double seed = opt_num(cli, "seed", 0.0);
        const double radius = opt_num(cli, "radius", 0.5);
        res = find_double_saddle_node(fam, seed, radius, tol_lambda, opt);
    } else {
        auto v = split_nums(opt_str(cli, "lambda", "-1:1"), ':');
        if (v.size() != 2) usage_error("bifurcate: --lambda LO:HI bracket required");
        res = find_saddle_node(fam, v[0], v[1], tol_lambda, opt);
    }

    json j;
    j["config"] = resolved_config(cli);
    j["kind"] = res.kind == BifurcationKind::single_saddle_node ? "single_saddle_node"
                                                                : "double_saddle_node";
    if (res.kind == BifurcationKind::single_saddle_node) {
        j["lambda_tilde"] = res.lambda_tilde;
    } else {
        j["lambda_minus"] = res.lambda_minus;
        j["lambda_plus"] = res.lambda_plus;
    }
    j["half_width"] = res.half_width;
    j["undetermined_width"] = res.undetermined_width;
    j["probes"] = probes_json(res.probes);
    write_json(dir + "/bifurcate.json", j);

    std::vector<std::vector<std::string>> rows;
    if (res.kind == BifurcationKind::single_saddle_node) {
        io::write_csv(dir + "/bifurcate.csv", {"lambda_tilde", "half_width", "undetermined_width"},
                      {{io::fmt(res.lambda_tilde), io::fmt(res.half_width),
                        io::fmt(res.undetermined_width)}});
        std::cout << "lambda_tilde = " << io::fmt(res.lambda_tilde) << " +/- "
                  << io::fmt(res.half_width) << "\n";
    } else {
        io::write_csv(dir + "/bifurcate.csv",
                      {"lambda_minus", "lambda_plus", "half_width", "undetermined_width"},
                      {{io::fmt(res.lambda_minus), io::fmt(res.lambda_plus),
                        io::fmt(res.half_width), io::fmt(res.undetermined_width)}});
        std::cout << "lambda_minus = " << io::fmt(res.lambda_minus)
                  << ", lambda_plus = " << io::fmt(res.lambda_plus) << " +/- "
                  << io::fmt(res.half_width) << "\n";
    }
    return 0;
}

std::vector<double> parse_grid(const std::string& spec) {
    auto v = split_nums(spec, ':');
    if (v.size() != 3 || !(v[2] > 0)) usage_error("--k expects LO:HI:STEP");
    std::vector<double> grid;
    for (double k = v[0]; k <= v[1] + 1e-12; k += v[2]) grid.push_back(k);
    return grid;
}

int cmd_curve(const Cli& cli) {
    const std::string preset = opt_str(cli, "preset", "");
    const std::string dir = outdir(cli);
    CurveRequest req;
    req.tol_lambda = opt_num(cli, "tol-lambda", 1e-4);
    req.jobs = (int)opt_num(cli, "jobs", 1);
    req.sopts = build_structure_options(cli);

    if (preset == "fig1" || (preset.empty() && opt_str(cli, "model", "") == "holling")) {
        req.family_at = [](double k) {
            return holling_family(holling_quasiperiodic_coefficients(), hat_forcing(k));
        };
        req.kind = BifurcationKind::single_saddle_node;
        req.lambda_lo = presets::kPopulationLambdaLo;
        req.lambda_hi = presets::kPopulationLambdaHi;
        req.k_grid = parse_grid(opt_str(cli, "k", "0:40:1"));
    } else if (preset == "fig5" || (preset.empty() && opt_str(cli, "model", "") == "circuit")) {
        const double s = opt_num(cli, "from", 0.0);  // forcing phase
        req.family_at = [s](double k) { return presets::circuit_hat_family(k, s); };
        req.kind = BifurcationKind::double_saddle_node;
        req.seed = presets::kCircuitSeed;
        req.radius = presets::kCircuitScanRadius;
        req.k_grid = parse_grid(opt_str(cli, "k", "0:10:0.5"));
    } else {
        usage_error("curve: use --preset fig1|fig5 or --model holling|circuit");
    }

    const auto points = trace_curve(req);

    std::vector<std::vector<std::string>> rows;
    json diag = json::array();
    for (const auto& pt : points) {
        json pj;
        pj["k"] = pt.k;
        pj["ok"] = pt.ok;
        pj["cold_check_ok"] = pt.cold_check_ok;
        if (!pt.ok) pj["error"] = pt.error;
        if (req.kind == BifurcationKind::single_saddle_node) {
            rows.push_back({io::fmt(pt.k), pt.ok ? io::fmt(pt.result.lambda_tilde) : "nan",
                            io::fmt(pt.result.half_width), pt.ok ? "ok" : "failed"});
            if (pt.ok) pj["lambda_tilde"] = pt.result.lambda_tilde;
        } else {
            rows.push_back({io::fmt(pt.k), pt.ok ? io::fmt(pt.result.lambda_minus) : "nan",
                            pt.ok ? io::fmt(pt.result.lambda_plus) : "nan",
                            io::fmt(pt.result.half_width), pt.ok ? "ok" : "failed"});
            if (pt.ok) {
                pj["lambda_minus"] = pt.result.lambda_minus;
                pj["lambda_plus"] = pt.result.lambda_plus;
            }
        }
        diag.push_back(pj);
    }
    const bool single = req.kind == BifurcationKind::single_saddle_node;
    io::write_csv(dir + "/curve.csv",
                  single ? std::vector<std::string>{"k", "lambda_tilde", "bracket_width", "status"}
                         : std::vector<std::string>{"k", "lambda_minus", "lambda_plus",
                                                    "bracket_width", "status"},
                  rows);
    json j;
    j["config"] = resolved_config(cli);
    j["points"] = diag;
    write_json(dir + "/curve.json", j);

    if (opt_str(cli, "format", "csv") == "svg") {
        io::Series ser;
        ser.name = single ? "lambda_tilde" : "lambda_minus";
        for (const auto& pt : points)
            if (pt.ok) {
                ser.x.push_back(pt.k);
                ser.y.push_back(single ? pt.result.lambda_tilde : pt.result.lambda_minus);
            }
        std::vector<io::Series> all{ser};
        if (!single) {
            io::Series sp;
            sp.name = "lambda_plus";
            for (const auto& pt : points)
                if (pt.ok) {
                    sp.x.push_back(pt.k);
                    sp.y.push_back(pt.result.lambda_plus);
                }
            all.push_back(sp);
        }
        io::write_svg(dir + "/curve.svg", all, "bifurcation curve");
    }
    std::cout << "wrote " << dir << "/curve.csv (" << points.size() << " points)\n";
    return 0;
}

TippingProblem preset_problem(const Cli& cli, double horizon_dflt) {
    const std::string preset = opt_str(cli, "preset", "sec42");
    const double horizon = opt_num(cli, "horizon", horizon_dflt);
    if (preset == "sec42") return presets::hunting_transition_problem(horizon);
    if (preset == "fig3") return presets::population_transition_problem(0.5, horizon);
    usage_error("transition preset must be sec42 or fig3");
}

int cmd_classify(const Cli& cli) {
    TippingProblem prob = preset_problem(cli, opt_str(cli, "preset", "sec42") == "fig3" ? 40.0 : 165.0);
    const double lambda = opt_num(cli, "lambda", 0.3);
    const ScalarField field = prob.family.at(lambda);
    const AttractorRefs refs = prob.refs_for(lambda);
    const TransitionVerdict v = classify(field, refs, prob.horizon, prob.copts);
    const std::string dir = outdir(cli);

    json j;
    j["config"] = resolved_config(cli);
    j["outcome"] = v.outcome == TransitionOutcome::tracking ? "tracking"
                   : v.outcome == TransitionOutcome::tipping ? "tipping" : "boundary";
    j["dist_tracked"] = v.dist_tracked;
    if (std::isfinite(v.dist_alternative)) j["dist_alternative"] = v.dist_alternative;
    j["blew_up"] = v.blew_up;
    if (v.blew_up) {
        j["escape_time"] = v.escape_time;
        j["escape_sign"] = v.escape_sign;
    }
    j["terminal_value"] = v.terminal_value;
    j["horizon"] = v.horizon;
    write_json(dir + "/classify.json", j);

    // trajectory dump of the pullback attractive solution continued forward
    double dump_x_hi;
    if (prob.copts.x_hi) {
        dump_x_hi = *prob.copts.x_hi;
    } else {
        auto lvl = coercive_level_above(field, prob.copts.past_window_lo,
                                        prob.copts.past_window_hi, 4);
        if (!lvl) throw std::runtime_error("classify: no coercive start level for the dump");
        dump_x_hi = *lvl;
    }
    auto past = upper_bounded(field, prob.copts.past_window_lo, prob.copts.past_window_hi,
                              dump_x_hi, prob.copts.pullback);
    if (past.exists) {
        SolveOptions so;
        so.tol = prob.copts.pullback.tol;
        Trajectory cont = solve(field, prob.copts.past_window_hi,
                                past.value_at(prob.copts.past_window_hi), prob.horizon, so);
        std::vector<std::vector<std::string>> rows;
        const double end = cont.end_time();
        for (double t = prob.copts.past_window_lo; t <= end; t += 0.1) {
            const double x = t <= prob.copts.past_window_hi ? past.value_at(t) : cont(std::min(t, end));
            rows.push_back({io::fmt(t), io::fmt(x)});
        }
        io::write_csv(dir + "/classify_trajectory.csv", {"t", "x"}, rows);
    }
    std::cout << "outcome: " << j["outcome"].get<std::string>() << "\n";
    return 0;
}

int cmd_tip(const Cli& cli) {
    TippingProblem prob = preset_problem(cli, opt_str(cli, "preset", "sec42") == "fig3" ? 40.0 : 165.0);
    auto v = split_nums(opt_str(cli, "lambda", "0.3:0.4"), ':');
    if (v.size() != 2) usage_error("tip: --lambda LO:HI bracket required");
    const double tol_lambda = opt_num(cli, "tol-lambda", 1e-4);
    const BifurcationResult res = find_tipping(prob, v[0], v[1], tol_lambda);
    const std::string dir = outdir(cli);

    json j;
    j["config"] = resolved_config(cli);
    j["lambda_c"] = res.lambda_tilde;
    j["half_width"] = res.half_width;
    j["undetermined_width"] = res.undetermined_width;
    j["probes"] = probes_json(res.probes);
    write_json(dir + "/tip.json", j);
    std::cout << "lambda_c = " << io::fmt(res.lambda_tilde) << " +/- " << io::fmt(res.half_width)
              << "\n";
    return 0;
}

// ---- reproduce ----

int reproduce_fig1(const Cli& cli, const std::string& dir) {
    CurveRequest req;
    req.family_at = [](double k) {
        return holling_family(holling_quasiperiodic_coefficients(), hat_forcing(k));
    };
    req.kind = BifurcationKind::single_saddle_node;
    req.lambda_lo = presets::kPopulationLambdaLo;
    req.lambda_hi = presets::kPopulationLambdaHi;
    req.tol_lambda = opt_num(cli, "tol-lambda", 1e-4);
    req.sopts = presets::population_structure_options();
    req.jobs = (int)opt_num(cli, "jobs", 1);
    req.k_grid = parse_grid(opt_str(cli, "k", "0:40:1"));
    const auto points = trace_curve(req);

    const auto lam_m1 =
        presets::population_bifurcation(constant(-1.0), false, req.tol_lambda).lambda_tilde;
    const auto lam_p1 =
        presets::population_bifurcation(constant(1.0), false, req.tol_lambda).lambda_tilde;

    std::vector<std::vector<std::string>> rows;
    io::Series ser{"lambda_tilde(p_k)", {}, {}};
    for (const auto& pt : points) {
        rows.push_back({io::fmt(pt.k), pt.ok ? io::fmt(pt.result.lambda_tilde) : "nan",
                        io::fmt(req.tol_lambda), pt.ok ? "ok" : "failed"});
        if (pt.ok) {
            ser.x.push_back(pt.k);
            ser.y.push_back(pt.result.lambda_tilde);
        }
    }
    io::write_csv(dir + "/fig1_curve.csv", {"k", "lambda_tilde", "bracket_width", "status"}, rows);
    json j;
    j["config"] = resolved_config(cli);
    j["window"] = {-40.0, 40.0};
    j["lambda_tilde_const_minus1"] = lam_m1;
    j["lambda_tilde_const_plus1"] = lam_p1;
    write_json(dir + "/fig1.json", j);
    if (opt_str(cli, "format", "csv") == "svg")
        io::write_svg(dir + "/fig1.svg", {ser}, "hat-forcing bifurcation curve");
    return 0;
}

int reproduce_fig2(const Cli& cli, const std::string& dir) {
    const double tol = opt_num(cli, "tol-lambda", 1e-4);
    std::vector<double> ks{0.0};
    for (int e = 8; e >= 0; --e) ks.push_back(std::pow(0.5, e));
    std::vector<std::vector<std::string>> rows;
    io::Series ser{"lambda_tilde(p_k)", {}, {}};
    json pts = json::array();
    for (double k : ks) {
        const auto pt = presets::population_blend_bifurcation(k, tol);
        rows.push_back({io::fmt(pt.k), io::fmt(pt.lambda), io::fmt(pt.lambda_base),
                        io::fmt(pt.lambda_future), io::fmt(pt.future_shift)});
        json pj;
        pj["k"] = pt.k;
        pj["lambda"] = pt.lambda;
        pj["lambda_base"] = pt.lambda_base;
        if (std::isfinite(pt.lambda_future)) pj["lambda_future"] = pt.lambda_future;
        pts.push_back(pj);
        if (k > 0) {
            ser.x.push_back(pt.k);
            ser.y.push_back(pt.lambda);
        }
    }
    io::write_csv(dir + "/fig2_curve.csv",
                  {"k", "lambda_tilde", "lambda_base_window", "lambda_future_window",
                   "future_shift"},
                  rows);
    json j;
    j["config"] = resolved_config(cli);
    j["points"] = pts;
    j["note"] =
        "lambda_tilde combines the [-40,40] base window with the settled-future window "
        "(shift 40+2/k^2); the discontinuity at k=0 is the gap to the first row";
    write_json(dir + "/fig2.json", j);
    if (opt_str(cli, "format", "csv") == "svg")
        io::write_svg(dir + "/fig2.svg", {ser}, "blend-forcing bifurcation values");
    return 0;
}

int reproduce_fig3(const Cli& cli, const std::string& dir) {
    const double tol = opt_num(cli, "tol-lambda", 1e-4);
    TippingProblem prob = presets::population_transition_problem(0.5);
    const BifurcationResult sn = find_saddle_node(
        prob.family, presets::kPopulationLambdaLo, presets::kPopulationLambdaHi, tol,
        presets::population_structure_options());

    json cases = json::array();
    std::vector<io::Series> series;
    for (double lambda : {0.1185, sn.lambda_tilde, 0.1195}) {
        const ScalarField field = prob.family.at(lambda);
        const AttractorRefs refs = prob.refs_for(lambda);
        const TransitionVerdict v = classify(field, refs, prob.horizon, prob.copts);
        json cj;
        cj["lambda"] = lambda;
        cj["outcome"] = v.outcome == TransitionOutcome::tracking ? "tracking"
                        : v.outcome == TransitionOutcome::tipping ? "tipping" : "boundary";
        cases.push_back(cj);

        auto past = upper_bounded(field, prob.copts.past_window_lo, prob.copts.past_window_hi,
                                  34.0, prob.copts.pullback);
        if (past.exists) {
            SolveOptions so;
            so.tol = prob.copts.pullback.tol;
            so.x_guard = 1e6;
            Trajectory cont = solve(field, prob.copts.past_window_hi,
                                    past.value_at(prob.copts.past_window_hi), prob.horizon, so);
            io::Series s;
            s.name = "lambda=" + io::fmt(lambda);
            const double end = cont.end_time();
            for (double t = prob.copts.past_window_lo; t <= end; t += 0.05) {
                const double x = t <= prob.copts.past_window_hi ? past.value_at(t)
                                                                : cont(std::min(t, end));
                if (std::abs(x) < 60) {
                    s.x.push_back(t);
                    s.y.push_back(x);
                }
            }
            series.push_back(std::move(s));
        }
    }
    json j;
    j["config"] = resolved_config(cli);
    j["lambda_tilde"] = sn.lambda_tilde;
    j["half_width"] = sn.half_width;
    j["window"] = {-40.0, 40.0};
    j["cases"] = cases;
    write_json(dir + "/fig3.json", j);
    std::vector<std::vector<std::string>> rows;
    if (!series.empty()) {
        for (std::size_t i = 0; i < series[0].x.size(); ++i) {
            std::vector<std::string> row{io::fmt(series[0].x[i])};
            for (const auto& s : series)
                row.push_back(i < s.x.size() ? io::fmt(s.y[i]) : "nan");
            rows.push_back(row);
        }
        std::vector<std::string> header{"t"};
        for (const auto& s : series) header.push_back(s.name);
        io::write_csv(dir + "/fig3_solutions.csv", header, rows);
    }
    if (opt_str(cli, "format", "csv") == "svg")
        io::write_svg(dir + "/fig3.svg", series, "transition outcomes");
    return 0;
}

int reproduce_fig5(const Cli& cli, const std::string& dir) {
    const double tol = opt_num(cli, "tol-lambda", 1e-4);
    std::vector<std::vector<std::string>> rows;
    std::vector<io::Series> minus_series, plus_series;
    for (double s : {0.0, -1.25, -2.5}) {
        CurveRequest req;
        req.family_at = [s](double k) { return presets::circuit_hat_family(k, s); };
        req.kind = BifurcationKind::double_saddle_node;
        req.seed = presets::kCircuitSeed;
        req.radius = presets::kCircuitScanRadius;
        req.tol_lambda = tol;
        req.sopts = presets::circuit_structure_options();
        req.jobs = (int)opt_num(cli, "jobs", 1);
        req.k_grid = parse_grid(opt_str(cli, "k", "0:10:0.5"));
        const auto points = trace_curve(req);
        io::Series sm{"s=" + io::fmt(s), {}, {}}, sp = sm;
        for (const auto& pt : points) {
            rows.push_back({io::fmt(s), io::fmt(pt.k),
                            pt.ok ? io::fmt(pt.result.lambda_minus) : "nan",
                            pt.ok ? io::fmt(pt.result.lambda_plus) : "nan",
                            pt.ok ? "ok" : "failed"});
            if (pt.ok) {
                sm.x.push_back(pt.k);
                sm.y.push_back(pt.result.lambda_minus);
                sp.x.push_back(pt.k);
                sp.y.push_back(pt.result.lambda_plus);
            }
        }
        minus_series.push_back(std::move(sm));
        plus_series.push_back(std::move(sp));
    }
    io::write_csv(dir + "/fig5_curves.csv", {"s", "k", "lambda_minus", "lambda_plus", "status"},
                  rows);
    json j;
    j["config"] = resolved_config(cli);
    write_json(dir + "/fig5.json", j);
    if (opt_str(cli, "format", "csv") == "svg") {
        io::write_svg(dir + "/fig5_minus.svg", minus_series, "circuit lower bifurcation values");
        io::write_svg(dir + "/fig5_plus.svg", plus_series, "circuit upper bifurcation values");
    }
    return 0;
}

int reproduce_fig6(const Cli& cli, const std::string& dir) {
    const double tol = opt_num(cli, "tol-lambda", 1e-4);
    std::vector<double> ks{0.0};
    for (int e = 8; e >= 0; --e) ks.push_back(std::pow(0.5, e));
    std::vector<std::vector<std::string>> rows;
    for (double k : ks) {
        const auto pt = presets::circuit_blend_double(k, tol);
        rows.push_back({io::fmt(pt.k), io::fmt(pt.lambda_minus), io::fmt(pt.lambda_plus),
                        io::fmt(pt.base_minus), io::fmt(pt.base_plus),
                        io::fmt(pt.future_minus), io::fmt(pt.future_plus)});
    }
    io::write_csv(dir + "/fig6_curves.csv",
                  {"k", "lambda_minus", "lambda_plus", "base_minus", "base_plus",
                   "future_minus", "future_plus"},
                  rows);
    json j;
    j["config"] = resolved_config(cli);
    write_json(dir + "/fig6.json", j);
    return 0;
}

int reproduce_sec42(const Cli& cli, const std::string& dir) {
    const double tol = opt_num(cli, "tol-lambda", 1e-4);
    TippingProblem prob = presets::hunting_transition_problem();
    const BifurcationResult res = find_tipping(prob, 0.34, 0.36, tol);

    // attractive upper solutions for a ladder of lambdas
    std::vector<io::Series> series;
    const double t0 = -5.0, t1 = 80.0;
    for (double lambda : {0.1, 0.2, 0.3, 0.34, 0.35, 0.36, 0.4, 0.5}) {
        const ScalarField field = prob.family.at(lambda);
        SolveOptions so;
        so.tol = 1e-10;
        Trajectory run = solve(field, t0 - 30.0, 3.0, t1, so);
        io::Series s;
        s.name = "lambda=" + io::fmt(lambda);
        for (double t = t0; t <= t1; t += 0.1) {
            s.x.push_back(t);
            s.y.push_back(run(t));
        }
        series.push_back(std::move(s));
    }
    std::vector<std::string> header{"t"};
    for (const auto& s : series) header.push_back(s.name);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < series[0].x.size(); ++i) {
        std::vector<std::string> row{io::fmt(series[0].x[i])};
        for (const auto& s : series) row.push_back(io::fmt(s.y[i]));
        rows.push_back(row);
    }
    io::write_csv(dir + "/sec42_solutions.csv", header, rows);

    json j;
    j["config"] = resolved_config(cli);
    j["lambda_c"] = res.lambda_tilde;
    j["half_width"] = res.half_width;
    j["horizon"] = prob.horizon;
    write_json(dir + "/sec42.json", j);
    if (opt_str(cli, "format", "csv") == "svg")
        io::write_svg(dir + "/sec42.svg", series, "upper attractive solutions under hunting");
    std::cout << "lambda_c = " << io::fmt(res.lambda_tilde) << "\n";
    return 0;
}

int cmd_reproduce(const Cli& cli) {
    const std::string target = opt_str(cli, "target", opt_str(cli, "preset", ""));
    const std::string dir = outdir(cli);
    if (target == "fig1") return reproduce_fig1(cli, dir);
    if (target == "fig2") return reproduce_fig2(cli, dir);
    if (target == "fig3") return reproduce_fig3(cli, dir);
    if (target == "fig5") return reproduce_fig5(cli, dir);
    if (target == "fig6") return reproduce_fig6(cli, dir);
    if (target == "sec42") return reproduce_sec42(cli, dir);
    usage_error("reproduce target must be one of fig1 fig2 fig3 fig5 fig6 sec42");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return 2;
    }
    Cli cli = parse_cli(argc, argv);
    try {
        if (cli.command == "signal") return cmd_signal(cli);
        if (cli.command == "solve") return cmd_solve(cli);
        if (cli.command == "bounded") return cmd_bounded(cli);
        if (cli.command == "bifurcate") return cmd_bifurcate(cli);
        if (cli.command == "curve") return cmd_curve(cli);
        if (cli.command == "classify") return cmd_classify(cli);
        if (cli.command == "tip") return cmd_tip(cli);
        if (cli.command == "reproduce") return cmd_reproduce(cli);
        usage_error("unknown command '" + cli.command + "'");
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
