#include "mixfront/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "mixfront/classify.hpp"
#include "mixfront/errors.hpp"
#include "mixfront/harness.hpp"
#include "mixfront/io.hpp"

namespace mixfront {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output.dir);
    return (fs::path(cfg.output.dir) / name).string();
}

Thresholds thresholds_for(const RunConfig& cfg) {
    return compute_thresholds(cfg.spec, cfg.numerics.bisection_tol, cfg.numerics.M);
}

bool even_profile(const InitialProfile& p) {
    for (int i = 0; i <= 100; ++i) {
        const double s = i / 100.0;
        if (std::abs(p(s) - p(-s)) > 1e-14) return false;
    }
    return true;
}

void plot_trajectory(const RunConfig& cfg, const Trajectory& tr) {
    const auto& s = tr.series;
    write_text(out_path(cfg, "fronts.svg"),
               render_svg({"Free boundaries", "t", "x", false, false},
                          {{"h(t)", s.t, s.h}, {"g(t)", s.t, s.g}}));
    write_text(out_path(cfg, "fields.svg"),
               render_svg({"Field maxima", "t", "max", true, false},
                          {{"max u", s.t, s.max_u}, {"max v", s.t, s.max_v}}));
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.out) cfg.output.dir = *o.out;
    if (o.horizon) {
        if (!(*o.horizon >= 0.0)) throw ConfigError("horizon", "must be nonnegative");
        cfg.numerics.horizon = *o.horizon;
    }
    if (o.seed) cfg.seed = *o.seed;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    const Thresholds th = thresholds_for(cfg);
    const ClassifyOptions copts = cfg.classify_options(th);
    const Trajectory tr = run(cfg.spec, with_early_stop(cfg.run_options(), copts));
    const Outcome outcome = classify(tr, copts);

    write_trajectory_csv(out_path(cfg, "trajectory.csv"), tr.series);
    if (cfg.output.field_dumps) write_field_dumps(out_path(cfg, "fields.jsonl"), tr);
    json j = to_json(outcome);
    j["steps"] = tr.steps;
    j["stop_reason"] = tr.stop_reason;
    j["bounds"] = to_json(tr.bounds);
    j["thresholds"] = thresholds_json(th, cfg.spec);
    j["spread_length"] = copts.spread_length;
    j["seed"] = cfg.seed;
    write_json(out_path(cfg, "outcome.json"), j);
    if (cfg.output.plots) plot_trajectory(cfg, tr);

    log << "verdict " << to_string(outcome.verdict) << " at t=" << outcome.final_time
        << " (h-g=" << outcome.length << ", steps=" << tr.steps << ")\n";
    return exit_ok;
}

int cmd_eigen(const RunConfig& cfg, std::ostream& log) {
    const auto& sp = cfg.spec;
    EigenCurve curve;
    for (double len : cfg.eigen.lengths) {
        curve.length.push_back(len);
        curve.nonlocal.push_back(
            lambda1_nonlocal(sp.kernel, sp.d1, sp.coefficients.a, len, cfg.numerics.M).lambda1);
        curve.mixed.push_back(
            lambda1_mixed(sp.kernel, sp.d2, sp.tau, sp.coefficients.c, len, cfg.numerics.M).lambda1);
    }
    const Thresholds th = thresholds_for(cfg);
    write_eigen_csv(out_path(cfg, "eigen_curves.csv"), curve);
    write_json(out_path(cfg, "thresholds.json"), thresholds_json(th, sp));
    if (cfg.output.plots) {
        write_text(out_path(cfg, "eigen.svg"),
                   render_svg({"Principal eigenvalue", "length", "lambda1", false, true},
                              {{"nonlocal", curve.length, curve.nonlocal},
                               {"mixed", curve.length, curve.mixed}}));
    }
    log << "h* = " << th.h_star << ", l* = ";
    if (th.l_star) log << *th.l_star << '\n';
    else log << "none (a_T >= d1)\n";
    return exit_ok;
}

int cmd_predict(const RunConfig& cfg, bool confirm, std::ostream& log) {
    const Thresholds th = thresholds_for(cfg);
    const CriteriaPrediction pred = predict(cfg.spec, th);
    json j = to_json(pred);
    j["thresholds"] = thresholds_json(th, cfg.spec);
    const auto verdict = pred.verdict();
    if (confirm && verdict) {
        const ClassifyOptions copts = cfg.classify_options(th);
        const Outcome o = confirm_spreading(cfg.spec, cfg.run_options(), copts);
        j["confirmation"] = to_json(o);
        j["confirmed"] = o.verdict == *verdict;
    }
    write_json(out_path(cfg, "prediction.json"), j);
    log << "prediction " << (verdict ? to_string(*verdict) : std::string("none"))
        << (pred.bistable() ? " (small responses vanish, large spread)" : "") << '\n';
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::size_t jobs, std::ostream& log) {
    const Thresholds th = thresholds_for(cfg);
    const ClassifyOptions copts = cfg.classify_options(th);
    const SweepResult res = sweep_response(cfg.spec, cfg.sweep.factors, cfg.run_options(), copts, jobs);
    write_sweep_csv(out_path(cfg, "sweep.csv"), res);
    json j = to_json(res);
    j["thresholds"] = thresholds_json(th, cfg.spec);
    write_json(out_path(cfg, "sweep.json"), j);
    if (cfg.output.plots) {
        std::vector<double> s, len;
        for (const auto& r : res.rows) {
            s.push_back(r.scale);
            len.push_back(r.outcome.length);
        }
        write_text(out_path(cfg, "sweep.svg"),
                   render_svg({"Terminal h-g by response scale", "scale", "h-g", true, true},
                              {{"h-g", s, len}}));
    }
    log << "bracket [";
    if (res.last_vanishing) log << *res.last_vanishing;
    else log << "-";
    log << ", ";
    if (res.first_spreading) log << *res.first_spreading;
    else log << "-";
    log << "], transitions " << res.transitions << (res.monotone ? "" : ", NON-MONOTONE") << '\n';
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::size_t /*jobs*/, std::ostream& log) {
    const auto& sp = cfg.spec;
    VerificationReport rep;
    json extra;

    const ValidationReport kv = sp.kernel.validate();
    rep.checks.push_back({"kernel", true, kv.ok(), kv.normalization_defect, 1e-6, kv.first_failure()});

    const Thresholds th = thresholds_for(cfg);
    const ClassifyOptions copts = cfg.classify_options(th);
    const Trajectory tr = run(sp, with_early_stop(cfg.run_options(), copts));
    for (auto& c : check_bounds(tr)) rep.checks.push_back(std::move(c));

    Check sym = check_symmetry(tr);
    if (!(even_profile(sp.u0) && even_profile(sp.v0) && kv.symmetry_defect <= 1e-12)) {
        sym.applicable = false;
        sym.detail = "initial data not even";
    }
    rep.checks.push_back(sym);
    rep.checks.push_back(check_max_principle(sp, cfg.verify.max_principle_trials, cfg.seed));
    rep.checks.push_back(ordering_campaign(sp.kernel, sp.d1, sp.coefficients.a, 2.0 * sp.h0,
                                           cfg.verify.ordering_pairs, cfg.seed,
                                           cfg.verify.ordering_horizon));

    const CriteriaPrediction pred = predict(sp, th);
    extra["prediction"] = to_json(pred);

    try {
        const Supersolution sup = build_supersolution(sp, th);
        extra["supersolution"] = to_json(sup);
        rep.checks.push_back({"supersolution_residual", true, sup.min_residual_fine > 0.0,
                              sup.min_residual_fine, 0.0, "min over 10x finer time samples"});
        const double total = sp.mu + sp.rho1 + sp.rho2;
        const double factor = std::min(1.0, 0.99 * sup.Lambda0 / total);
        const ProblemSpec small = sp.scaled_responses(factor);
        RunOptions ro = with_early_stop(cfg.run_options(), copts);
        ro.horizon = std::max(ro.horizon, 200.0);
        const Trajectory str = run(small, ro);
        Check dom = check_domination(sup, small, str);
        dom.detail += (dom.detail.empty() ? "" : "; ") + std::string("responses scaled by ") +
                      std::to_string(factor);
        rep.checks.push_back(dom);
        const Outcome o = classify(str, copts);
        rep.checks.push_back({"vanishing_below_Lambda0", true, o.verdict == Verdict::vanishing,
                              o.length, 2.0 * sup.h2, to_string(o.verdict)});
    } catch (const HypothesisError& e) {
        rep.checks.push_back({"supersolution_domination", false, true, 0.0, 0.0, e.what()});
    }

    if (pred.verdict() == Verdict::spreading) {
        const Outcome o = confirm_spreading(sp, cfg.run_options(), copts);
        rep.checks.push_back({"spreading_confirmed", true, o.verdict == Verdict::spreading, o.length,
                              copts.spread_length, to_string(o.verdict)});
    }

    json j = to_json(rep);
    j["seed"] = cfg.seed;
    j["thresholds"] = thresholds_json(th, sp);
    j.update(extra);
    write_json(out_path(cfg, "verification.json"), j);

    for (const auto& c : rep.checks) {
        log << (c.applicable ? (c.passed ? "PASS " : "FAIL ") : "SKIP ") << c.name;
        if (!c.detail.empty()) log << " (" << c.detail << ')';
        log << '\n';
    }
    return rep.passed() ? exit_ok : exit_verification;
}

int run_command(const std::string& name, const std::string& path, const Overrides& o,
                bool confirm, std::ostream& log, std::ostream& err) {
    try {
        RunConfig cfg = load_config(path);
        apply_overrides(cfg, o);
        if (name == "simulate") return cmd_simulate(cfg, log);
        if (name == "eigen") return cmd_eigen(cfg, log);
        if (name == "predict") return cmd_predict(cfg, confirm, log);
        if (name == "sweep") return cmd_sweep(cfg, o.jobs, log);
        if (name == "verify") return cmd_verify(cfg, o.jobs, log);
        err << "unknown command " << name << '\n';
        return exit_config;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

}  // namespace mixfront
