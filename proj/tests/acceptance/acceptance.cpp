// One line per acceptance criterion: "criterion NN PASS|FAIL name: details (seconds / limit)".
// Usage: acceptance [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mixfront/classify.hpp"
#include "mixfront/eigen.hpp"
#include "mixfront/harness.hpp"
#include "mixfront/solver.hpp"

using namespace mixfront;

namespace {

struct Result {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[violated: " << what << "] ";
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<void(Result&)> body;
};

const Kernel tent = Kernel::tent(1.0);
const PeriodicCoefficient half = PeriodicCoefficient::constant(0.5);
const PeriodicCoefficient one = PeriodicCoefficient::constant(1.0);

// Analytic ground eigenvalue of the Dirichlet second difference, M interior nodes.
double discrete_dirichlet(double len, std::size_t m) {
    const double dx = len / static_cast<double>(m + 1);
    return 2.0 / (dx * dx) * (1.0 - std::cos(std::numbers::pi * dx / len));
}

ProblemSpec small_habitat() {
    ProblemSpec s;
    s.coefficients.a = PeriodicCoefficient::constant(0.3);
    s.h0 = 0.2;
    return s;
}

ClassifyOptions default_classifier(const ProblemSpec& spec, const Thresholds& th) {
    ClassifyOptions o;
    o.spread_length = default_spread_length(spec, th);
    o.settle_window = spec.coefficients.period();
    return o;
}

void c1(Result& r) {
    const double small = lambda1_nonlocal(tent, 1.0, half, 0.01, 400).lambda1;
    const double large = lambda1_nonlocal(tent, 1.0, half, 200.0, 400).lambda1;
    r.detail << "lambda1(0.01)=" << small << " lambda1(200)=" << large << ' ';
    r.require(std::abs(small - 0.5) < 0.02, "|lambda1(0.01) - 0.5| < 0.02");
    r.require(std::abs(large + 0.5) < 0.02, "|lambda1(200) + 0.5| < 0.02");
}

void c2(Result& r) {
    double pn = INFINITY, pm = INFINITY, gap = INFINITY;
    for (double len : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double n = lambda1_nonlocal(tent, 1.0, half, len).lambda1;
        const double m = lambda1_mixed(tent, 1.0, 0.5, one, len).lambda1;
        if (std::isfinite(pn)) gap = std::min({gap, pn - n, pm - m});
        pn = n;
        pm = m;
    }
    r.detail << "smallest gap " << gap << ' ';
    r.require(gap > 1e-6, "every gap > 1e-6");
}

void c3(Result& r) {
    const auto rep = lambda1_mixed(tent, 1.0, 1.0, one, std::numbers::pi, 400);
    const double ref = discrete_dirichlet(std::numbers::pi, 400) - 1.0;
    r.detail << "lambda1=" << rep.lambda1 << " oracle=" << ref << " diff=" << rep.lambda1 - ref << ' ';
    r.require(std::abs(rep.lambda1 - ref) <= 1e-8, "|diff| <= 1e-8");
}

void c4(Result& r) {
    const double tol = 1e-4;
    const double h4 = find_h_star(tent, 1.0, 1.0, one, tol, 400);
    const double h8 = find_h_star(tent, 1.0, 1.0, one, tol, 800);
    const auto l4 = find_l_star(tent, 1.0, half, tol, 400);
    const auto l8 = find_l_star(tent, 1.0, half, tol, 800);
    r.detail << "h*=" << h4 << " (M=800: " << h8 << ")";
    r.require(std::abs(h4 - std::numbers::pi) < 0.01, "|h* - pi| < 0.01");
    r.require(std::abs(h8 - h4) < 2.0 * tol, "h* stable under M -> 2M");
    r.require(l4 && l8, "l* exists for a_T < d1");
    if (l4 && l8) {
        r.detail << " l*=" << *l4 << " (M=800: " << *l8 << ") ";
        r.require(std::abs(*l8 - *l4) < 2.0 * tol, "l* stable under M -> 2M");
    }
}

void c5(Result& r) {
    const auto a = PeriodicCoefficient::sinusoidal(0.5, 0.3, 0.0);
    const double l = *find_l_star(tent, 1.0, a);
    FixedDomainOptions o;
    o.nodes = 201;
    auto u0 = [](double) { return 0.5; };
    o.record_stride = 1000000;
    const auto lo = run_fixed_domain_single(tent, 1.0, a, 0.5 * l, u0, 200.0, o);
    double peak = 0.0;
    for (double v : lo.u.back()) peak = std::max(peak, v);
    o.record_stride = 1;
    const auto hi = run_fixed_domain_single(tent, 1.0, a, 2.0 * l, u0, 200.0, o);
    const auto& last = hi.u.back();
    std::size_t k = hi.t.size() - 1;
    while (k > 0 && hi.t[k] > hi.t.back() - a.period() + 1e-9) --k;
    double resid = 0.0, low = INFINITY;
    for (std::size_t j = 0; j < last.size(); ++j) {
        resid = std::max(resid, std::abs(last[j] - hi.u[k][j]));
        low = std::min(low, last[j]);
    }
    r.detail << "l*=" << l << " max u(0.5 l*)=" << peak << " min u(2 l*)=" << low
             << " periodicity residual=" << resid << ' ';
    r.require(peak < 1e-6, "decay below 1e-6 at 0.5 l*");
    r.require(low > 0.0, "positive state at 2 l*");
    r.require(std::abs(hi.t[k] - (hi.t.back() - a.period())) < 1e-9, "one period apart");
    r.require(resid < 1e-3, "periodicity residual < 1e-3");
}

ProblemSpec random_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * U(rng); };
    ProblemSpec s;
    s.d1 = in(0.5, 2.0);
    s.d2 = in(0.5, 2.0);
    s.tau = in(0.2, 1.0);
    s.mu = in(0.1, 3.0);
    s.rho1 = in(0.1, 3.0);
    s.rho2 = in(0.1, 3.0);
    s.h0 = in(0.5, 2.0);
    const double period = in(0.5, 2.0);
    auto coeff = [&](double lo, double hi) {
        const double mean = in(lo, hi);
        return PeriodicCoefficient::sinusoidal(mean, in(0.0, 0.5) * mean, in(0.0, 6.0), period);
    };
    s.coefficients = CoefficientSet(coeff(0.5, 1.5), coeff(0.2, 1.5), coeff(0.5, 1.5), coeff(0.2, 1.5));
    switch (rng() % 3) {
        case 0: s.kernel = Kernel::tent(in(0.5, 2.0)); break;
        case 1: s.kernel = Kernel::truncated_gaussian(in(0.3, 1.0), in(1.0, 3.0)); break;
        default: s.kernel = Kernel::plateau(in(0.2, 1.0), in(0.2, 1.0)); break;
    }
    s.u0 = rng() % 2 ? InitialProfile::cosine(in(0.3, 2.0)) : InitialProfile::parabola(in(0.3, 2.0));
    s.v0 = rng() % 2 ? InitialProfile::cosine(in(0.3, 2.0)) : InitialProfile::parabola(in(0.3, 2.0));
    return s;
}

void c6(Result& r) {
    std::mt19937_64 rng(20240611);
    std::size_t failures = 0;
    for (int i = 0; i < 10; ++i) {
        const ProblemSpec s = random_spec(rng);
        RunOptions o;
        o.horizon = 20.0;
        o.intervals = 128;
        o.stop_length = 60.0;
        const auto tr = run(s, o);
        for (const auto& c : check_bounds(tr)) {
            if (c.applicable && !c.passed) {
                ++failures;
                r.detail << "run " << i << ' ' << c.name << ": " << c.detail << "; ";
            }
        }
    }
    r.detail << "10 runs, " << failures << " violated checks ";
    r.require(failures == 0, "all bounds hold");
}

void c7(Result& r) {
    std::vector<ProblemSpec> specs(3);
    specs[1].tau = 0.5;
    specs[1].coefficients.a = PeriodicCoefficient::sinusoidal(1.0, 0.5, 0.7);
    specs[2].tau = 0.3;
    specs[2].kernel = Kernel::truncated_gaussian(0.5, 1.5);
    specs[2].u0 = InitialProfile::parabola(0.8);
    specs[2].h0 = 0.7;
    double worst = 0.0;
    for (const auto& s : specs) {
        RunOptions o;
        o.horizon = 20.0;
        o.record_stride = 10;
        const auto c = check_symmetry(run(s, o), 1e-8);
        worst = std::max(worst, c.measured);
        r.require(c.passed, "symmetry defect <= 1e-8");
    }
    r.detail << "max defect " << worst << ' ';
}

void c8(Result& r) {
    std::vector<ProblemSpec> specs;
    for (double a : {1.0, 1.5, 2.5}) {
        ProblemSpec s;
        s.coefficients.a = PeriodicCoefficient::sinusoidal(a, 0.2, 0.0);
        s.h0 = 0.3;
        specs.push_back(s);
    }
    for (double tau : {1.0, 0.5, 0.2}) {
        ProblemSpec s;
        s.tau = tau;
        s.coefficients.a = PeriodicCoefficient::constant(0.5);
        s.h0 = 2.0;
        specs.push_back(s);
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto th = compute_thresholds(specs[i]);
        const auto pred = predict(specs[i], th);
        const RunOptions o;
        const auto out = classify(run(specs[i], with_early_stop(o, default_classifier(specs[i], th))),
                                  default_classifier(specs[i], th));
        r.detail << to_string(out.verdict) << "@t=" << out.final_time << ' ';
        r.require(pred.verdict() == Verdict::spreading, "criteria predict Spreading");
        r.require(out.verdict == Verdict::spreading, "classified Spreading by the default horizon");
    }
}

struct VanishingSetup {
    ProblemSpec spec;
    ProblemSpec scaled;
    Thresholds th;
    Supersolution sup;
    Trajectory traj;
};

const VanishingSetup& vanishing_setup() {
    static const VanishingSetup v = [] {
        VanishingSetup x;
        x.spec = small_habitat();
        x.th = compute_thresholds(x.spec);
        x.sup = build_supersolution(x.spec, x.th);
        const double total = x.spec.mu + x.spec.rho1 + x.spec.rho2;
        x.scaled = x.spec.scaled_responses(0.99 * x.sup.Lambda0 / total);
        RunOptions o;
        o.horizon = 200.0;
        x.traj = run(x.scaled, with_early_stop(o, default_classifier(x.spec, x.th)));
        return x;
    }();
    return v;
}

void c9(Result& r) {
    const auto& v = vanishing_setup();
    const auto out = classify(v.traj, default_classifier(v.spec, v.th));
    const double cell = out.length / static_cast<double>(RunOptions{}.intervals);
    const double lam = lambda1_nonlocal(v.spec.kernel, v.spec.d1, v.spec.coefficients.a, out.length).lambda1;
    r.detail << to_string(out.verdict) << " at t=" << out.final_time << " h-g=" << out.length
             << " (h*=" << v.th.h_star << ") field=" << out.field << " speed=" << out.speed
             << " lambda1=" << lam << ' ';
    r.require(out.verdict == Verdict::vanishing, "Vanishing");
    r.require(out.length <= v.th.h_star + 3.0 * cell, "h-g <= h* + 3 cells");
    r.require(out.field < 1e-6, "fields < 1e-6");
    const auto& s = v.traj.series;
    r.require(std::abs(s.hprime.back()) < 1e-8 && std::abs(s.gprime.back()) < 1e-8, "speeds < 1e-8");
    r.require(lam >= -0.05, "lambda1 on the terminal interval >= -0.05");
}

void c10(Result& r) {
    const auto& v = vanishing_setup();
    const auto dom = check_domination(v.sup, v.scaled, v.traj, 1e-8);
    r.detail << "Lambda0=" << v.sup.Lambda0 << " residual min=" << v.sup.min_residual
             << " (fine " << v.sup.min_residual_fine << ") max(h - s)=" << dom.measured << ' ';
    r.require(v.sup.min_residual > 0.0 && v.sup.min_residual_fine > 0.0, "residual positive");
    r.require(dom.applicable && dom.passed, "h <= s and g >= -s within 1e-8");
}

void c11(Result& r) {
    const ProblemSpec s = small_habitat();
    const auto th = compute_thresholds(s);
    RunOptions o;
    o.horizon = 100.0;
    const auto res = sweep_response(s, log_factors(0.01, 100.0, 13), o, default_classifier(s, th), 4);
    for (const auto& row : res.rows) {
        r.detail << row.scale << ':' << to_string(row.outcome.verdict)[0] << ' ';
        r.require(row.error.empty(), "no run errors");
    }
    r.require(predict(s, th).bistable(), "criteria report the bistable regime");
    r.require(res.monotone, "monotone verdicts");
    r.require(res.transitions == 1, "exactly one transition");
    r.require(res.bracket_nonempty(), "nonempty bracket");
}

void c12(Result& r) {
    const auto c = ordering_campaign(tent, 1.0, PeriodicCoefficient::sinusoidal(0.5, 0.3, 0.0), 2.0,
                                     50, 12345, 10.0);
    r.detail << c.detail << ' ';
    r.require(c.passed && c.measured == 0.0, "zero violations above 1e-9");
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

    const std::vector<Criterion> all = {
        {1, "eigenvalue limits", 10, c1},
        {2, "strict monotonicity", 10, c2},
        {3, "local spectral oracle", 5, c3},
        {4, "threshold roots", 30, c4},
        {5, "dynamical consistency", 60, c5},
        {6, "well-posedness bounds", 300, c6},
        {7, "symmetry", 30, c7},
        {8, "criteria confirmation", 300, c8},
        {9, "vanishing structure", 300, c9},
        {10, "supersolution domination", 120, c10},
        {11, "sweep dichotomy", 900, c11},
        {12, "ordering property", 120, c12},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        Result r;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) {
            r.pass = false;
            r.detail << "[over time budget] ";
        }
        std::printf("criterion %02d %s %s: %s(%.2f s / %.0f s)\n", c.id, r.pass ? "PASS" : "FAIL",
                    c.name.c_str(), r.detail.str().c_str(), secs, c.limit_s);
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
