#include "mixfront/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "mixfront/errors.hpp"
#include "mixfront/operators.hpp"

namespace mixfront {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

// max over one period of exp(integral_0^t (coeff - average)).
double periodic_factor_max(const PeriodicCoefficient& c) {
    double m = 1.0;
    for (int i = 0; i <= 1000; ++i) m = std::max(m, std::exp(c.centered_integral(c.period() * i / 1000.0)));
    return m;
}

// integral_0^t varsigma^{-2}, varsigma = a - b e^{-sigma t}.
double time_change(double t, double delta, double sigma) {
    const double a = 1.0 - 0.5 * delta, b = 0.5 * delta;
    const double e = std::exp(-sigma * t);
    const double vs = a - b * e;
    return (sigma * t + std::log(vs) - std::log(a - b) - b * e / vs + b / (a - b)) /
           (sigma * a * a);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void choose_span(const Supersolution& sup, const ProblemSpec& spec, std::size_t& samples,
                 double& span) {
    const double period = spec.coefficients.period();
    span = std::max(20.0 / sup.sigma, 10.0 * period);
    samples = static_cast<std::size_t>(std::clamp(std::ceil(4.0 * span / period), 200.0, 2000.0));
}

}  // namespace

double Supersolution::varsigma(double t) const {
    return 1.0 - 0.5 * delta - 0.5 * delta * std::exp(-sigma * t);
}

double Supersolution::s(double t) const { return h2 * varsigma(t); }

double supersolution_residual(const Supersolution& sup, const ProblemSpec& spec,
                              std::size_t t_samples, double t_span) {
    const auto& om = sup.omega.phi;
    const std::size_t m = om.size() - 2;
    const double deta = 2.0 * sup.h2 / static_cast<double>(m + 1);
    std::vector<double> inner(om.begin() + 1, om.end() - 1), slope(m), w_fixed(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) slope[i] = (om[i + 2] - om[i]) / (2.0 * deta);
    const double nl = spec.d2 * (1.0 - spec.tau);
    if (nl != 0.0) NonlocalMatrix(spec.kernel, deta, m, Quadrature::interior).apply(inner, w_fixed);
    const auto& c = spec.coefficients.c;

    double worst = std::numeric_limits<double>::infinity();
    std::vector<double> w_scaled(m, 0.0);
    for (std::size_t q = 0; q <= t_samples; ++q) {
        const double t = t_span * static_cast<double>(q) / static_cast<double>(t_samples);
        const double vs = sup.varsigma(t);
        const double dvs = 0.5 * sup.delta * sup.sigma * std::exp(-sup.sigma * t);
        const double inv2 = 1.0 / (vs * vs);
        const double cxi = c(time_change(t, sup.delta, sup.sigma));
        const double base = -sup.sigma + sup.lambda_v * inv2 + cxi * inv2 - c(t) + nl * (1.0 - inv2);
        if (nl != 0.0)
            NonlocalMatrix(spec.kernel, vs * deta, m, Quadrature::interior).apply(inner, w_scaled);
        for (std::size_t i = 0; i < m; ++i) {
            const double eta = sup.omega.x[i + 1];
            double r = base - (dvs / vs) * eta * slope[i] / inner[i];
            if (nl != 0.0) r += nl * (inv2 * w_fixed[i] - w_scaled[i]) / inner[i];
            worst = std::min(worst, r);
        }
    }
    return worst;
}

Supersolution build_supersolution(const ProblemSpec& spec, const Thresholds& th,
                                  const SupersolutionOptions& options) {
    if (!(th.a_T < spec.d1)) throw HypothesisError("a_T >= d1: spreading always happens");
    if (!(spec.h0 < 0.5 * th.h_star)) throw HypothesisError("h0 too large: h0 >= h*/2");
    if (!th.l_star || !(spec.h0 < 0.5 * *th.l_star))
        throw HypothesisError("h0 too large: h0 >= l*/2");
    const bool local = spec.tau == 1.0;
    if (!local && !(spec.kernel.flat_radius() > 2.0 * spec.h0))
        throw HypothesisError("tau < 1 needs a plateau kernel flat beyond 2 h0");

    Supersolution sup;
    sup.h0 = spec.h0;
    sup.h1 = 0.5 * (spec.h0 + 0.5 * *th.l_star);
    double upper = std::min(0.5 * th.h_star, sup.h1);
    if (!local) upper = std::min(upper, 0.5 * spec.kernel.flat_radius());
    sup.h2 = 0.5 * (spec.h0 + upper);

    sup.phi = lambda1_nonlocal(spec.kernel, spec.d1, spec.coefficients.a, 2.0 * sup.h1, options.nodes);
    sup.lambda_u = sup.phi.lambda1;
    if (!(sup.lambda_u > 0.0))
        throw HypothesisError("nonlocal eigenvalue on (-h1, h1) is not positive");
    sup.omega = lambda1_mixed(spec.kernel, spec.d2, spec.tau, spec.coefficients.c, 2.0 * sup.h2,
                              options.nodes);
    sup.lambda_v = sup.omega.lambda1;
    if (!(sup.lambda_v > 0.0))
        throw HypothesisError("mixed eigenvalue on (-h2, h2) is not positive");
    for (double& x : sup.phi.x) x -= sup.h1;
    for (double& x : sup.omega.x) x -= sup.h2;

    // alpha: x omega' <= alpha omega at interior nodes
    {
        const auto& om = sup.omega.phi;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < om.size(); ++i) {
            const double d = (om[i + 1] - om[i - 1]) / (sup.omega.x[i + 1] - sup.omega.x[i - 1]);
            worst = std::max(worst, sup.omega.x[i] * d / om[i]);
        }
        sup.alpha = worst + 0.05 * std::abs(worst);
    }

    sup.delta = std::min(0.1, 0.5 * (1.0 - spec.h0 / sup.h2));
    sup.sigma = 0.1;
    while (!(sup.sigma < 0.5 * sup.lambda_u)) sup.sigma *= 0.5;
    for (;;) {
        std::size_t n;
        double span;
        choose_span(sup, spec, n, span);
        sup.t_samples = n;
        sup.t_span = span;
        sup.min_residual = supersolution_residual(sup, spec, n, span);
        if (sup.min_residual > 0.0) break;
        if (++sup.rejections > options.max_rejections)
            throw HypothesisError("supersolution residual stays negative (min " +
                                  fmt(sup.min_residual) + ")");
        sup.delta *= 0.5;
        sup.sigma *= 0.5;
    }
    sup.min_residual_fine = supersolution_residual(sup, spec, 10 * sup.t_samples, sup.t_span);
    if (!(sup.min_residual_fine > 0.0))
        throw HypothesisError("supersolution residual negative at fine time sampling");

    // amplitudes: v(0, .) >= v0 and u(0, .) >= u0 on [-h0, h0]
    sup.k = 0.0;
    sup.C = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -spec.h0 + 2.0 * spec.h0 * i / 400.0;
        const double om = interp(sup.omega.x, sup.omega.phi, x / (1.0 - sup.delta));
        const double ph = interp(sup.phi.x, sup.phi.phi, x);
        sup.k = std::max(sup.k, spec.v0(x / spec.h0) / om);
        sup.C = std::max(sup.C, spec.u0(x / spec.h0) / ph);
    }

    double grad = 0.0;
    for (std::size_t i = 0; i + 1 < sup.omega.phi.size(); ++i)
        grad = std::max(grad, std::abs(sup.omega.phi[i + 1] - sup.omega.phi[i]) /
                                  (sup.omega.x[i + 1] - sup.omega.x[i]));
    const double pmax = periodic_factor_max(spec.coefficients.c);
    const double qmax = periodic_factor_max(spec.coefficients.a);
    sup.A = std::max({sup.k * pmax * (1.0 + grad) / (1.0 - sup.delta), 2.0 * sup.k * sup.h2 * pmax,
                      2.0 * sup.C * sup.h2 * qmax});
    sup.Lambda0 = sup.h2 * sup.delta * sup.sigma / (2.0 * sup.A);
    return sup;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return !c.applicable || c.passed; });
}

Check check_domination(const Supersolution& sup, const ProblemSpec& spec,
                       const Trajectory& trajectory, double tol) {
    Check c;
    c.name = "supersolution domination";
    c.limit = tol;
    const double total = spec.mu + spec.rho1 + spec.rho2;
    if (total > sup.Lambda0) {
        c.applicable = false;
        c.detail = "mu + rho1 + rho2 = " + fmt(total) + " exceeds Lambda0 = " + fmt(sup.Lambda0);
        return c;
    }
    const Series& s = trajectory.series;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double bound = sup.s(s.t[i]);
        const double excess = std::max(s.h[i] - bound, -bound - s.g[i]);
        worst = std::max(worst, excess);
        if (excess > tol && c.passed) {
            c.passed = false;
            c.detail = "first violation at t = " + fmt(s.t[i]);
        }
    }
    c.measured = worst;
    return c;
}

Check check_ordering(const FieldTrajectory& a, const FieldTrajectory& b, double tol) {
    Check c;
    c.name = "ordering";
    c.limit = tol;
    if (a.t.size() != b.t.size() || a.x.size() != b.x.size())
        throw ConfigError("trajectory", "ordering needs runs on the same grid and times");
    std::size_t violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        for (std::size_t i = 0; i < a.x.size(); ++i) {
            const double gap = a.u[k][i] - b.u[k][i];
            worst = std::max(worst, gap);
            if (gap > tol) {
                if (violations == 0)
                    c.detail = "first violation at t = " + fmt(a.t[k]) + ", x = " + fmt(a.x[i]);
                ++violations;
            }
        }
    }
    c.passed = violations == 0;
    c.measured = worst;
    return c;
}

Check ordering_campaign(const Kernel& kernel, double d1, const PeriodicCoefficient& a,
                        double length, std::size_t pairs, std::uint64_t seed, double horizon,
                        std::size_t nodes) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.05, 2.0), frac(0.0, 1.0);
    std::uniform_int_distribution<int> modes(1, 4);
    Check total;
    total.name = "ordering campaign";
    total.limit = 1e-9;
    total.measured = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    FixedDomainOptions opt;
    opt.nodes = nodes;
    for (std::size_t p = 0; p < pairs; ++p) {
        const double base = amp(rng);
        const int n = modes(rng);
        std::vector<double> wave(static_cast<std::size_t>(n));
        for (auto& w : wave) w = frac(rng);
        const double lift = frac(rng);
        auto ua = [&](double x) {
            double v = 0.0;
            for (int k = 0; k < n; ++k)
                v += wave[static_cast<std::size_t>(k)] *
                     std::pow(std::sin(std::numbers::pi * (k + 1) * x / length), 2);
            return base * v / n;
        };
        auto ub = [&](double x) { return ua(x) + lift * std::pow(std::sin(std::numbers::pi * x / length), 2); };
        const auto ra = run_fixed_domain_single(kernel, d1, a, length, ua, horizon, opt);
        const auto rb = run_fixed_domain_single(kernel, d1, a, length, ub, horizon, opt);
        const Check c = check_ordering(ra, rb, total.limit);
        total.measured = std::max(total.measured, c.measured);
        if (!c.passed) {
            if (violations == 0) total.detail = "pair " + std::to_string(p) + ": " + c.detail;
            ++violations;
        }
    }
    total.passed = violations == 0;
    if (total.passed) total.detail = std::to_string(pairs) + " pairs, seed " + std::to_string(seed);
    return total;
}

std::vector<Check> check_bounds(const Trajectory& tr) {
    const Series& s = tr.series;
    const Bounds& b = tr.bounds;
    Check u{"max u in (0, K1]", true, true, 0.0, 1.000001 * b.k1, ""};
    Check v{"max v in (0, K2]", true, true, 0.0, 1.000001 * b.k2, ""};
    Check grad{"|v_x| at fronts <= K3", true, true, 0.0, 1.1 * b.k3, ""};
    Check mono{"fronts strictly monotone", true, true, 0.0, 0.0, ""};
    Check env{"front speeds <= R(t)", true, true, 0.0, 1.0, ""};
    // Once a field has decayed past kUnderflow it may round to exact zero;
    // positivity and strictness are only asserted before that.
    constexpr double kUnderflow = 1e-250;
    bool u_gone = false, v_gone = false;
    double worst_env = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        u.measured = std::max(u.measured, s.max_u[i]);
        v.measured = std::max(v.measured, s.max_v[i]);
        if (!(s.max_u[i] > 0.0) && !u_gone && u.detail.empty()) u.detail = "u vanished at t = " + fmt(s.t[i]);
        if (!(s.max_v[i] > 0.0) && !v_gone && v.detail.empty()) v.detail = "v vanished at t = " + fmt(s.t[i]);
        u_gone = u_gone || s.max_u[i] < kUnderflow;
        v_gone = v_gone || s.max_v[i] < kUnderflow;
        grad.measured = std::max({grad.measured, std::abs(s.vx_left[i]), std::abs(s.vx_right[i])});
        worst_env = std::max(worst_env, std::max(s.hprime[i], -s.gprime[i]) / b.envelope(s.t[i]));
        const double step_h = i > 0 ? (s.t[i] - s.t[i - 1]) * s.hprime[i - 1] : 0.0;
        const double step_g = i > 0 ? (s.t[i] - s.t[i - 1]) * s.gprime[i - 1] : 0.0;
        const bool strict = i == 0 || (s.h[i] > s.h[i - 1] && s.g[i] < s.g[i - 1]) ||
                            (s.h[i] >= s.h[i - 1] && s.g[i] <= s.g[i - 1] &&
                             std::max(step_h, -step_g) < 4.0 * std::numeric_limits<double>::epsilon() *
                                                              std::max(s.h[i], -s.g[i]));
        const bool speeds_ok = (s.hprime[i] > 0.0 && s.gprime[i] < 0.0) || (u_gone && v_gone);
        if ((!speeds_ok || !strict) && mono.passed) {
            mono.passed = false;
            mono.detail = "first failure at t = " + fmt(s.t[i]);
        }
    }
    u.passed = u.measured <= u.limit && u.detail.empty();
    v.passed = v.measured <= v.limit && v.detail.empty();
    grad.passed = grad.measured <= grad.limit;
    env.measured = worst_env;
    env.passed = worst_env <= 1.0;
    return {u, v, grad, mono, env};
}

Check check_symmetry(const Trajectory& tr, double tol) {
    Check c{"symmetry", true, true, 0.0, tol, ""};
    for (const auto& st : tr.snapshots) {
        double d = std::abs(st.g + st.h);
        const std::size_t n = st.u.size();
        for (std::size_t j = 0; j < n; ++j)
            d = std::max({d, std::abs(st.u[j] - st.u[n - 1 - j]), std::abs(st.v[j] - st.v[n - 1 - j])});
        c.measured = std::max(c.measured, d);
    }
    const Series& s = tr.series;
    for (std::size_t i = 0; i < s.size(); ++i) c.measured = std::max(c.measured, std::abs(s.g[i] + s.h[i]));
    c.passed = c.measured <= tol;
    return c;
}

Check check_max_principle(const ProblemSpec& spec, std::size_t trials, std::uint64_t seed,
                          std::size_t intervals) {
    Check c{"discrete maximum principle", true, true, 0.0, 0.0, ""};
    const Bounds b = compute_bounds(spec);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trials; ++k) {
        FrontState st;
        st.t = unit(rng) * spec.coefficients.period();
        const double half = spec.h0 * (0.5 + 4.0 * unit(rng));
        st.g = -half * (0.5 + unit(rng));
        st.h = half * (0.5 + unit(rng));
        st.u.assign(intervals + 1, 0.0);
        st.v.assign(intervals + 1, 0.0);
        for (std::size_t j = 1; j < intervals; ++j) {
            // sparse nonnegative data, including exact zeros
            st.u[j] = unit(rng) < 0.3 ? 0.0 : b.k1 * unit(rng);
            st.v[j] = unit(rng) < 0.3 ? 0.0 : b.k2 * unit(rng);
        }
        const auto sp = front_speeds(st, spec);
        st.gprime = sp.gprime;
        st.hprime = sp.hprime;
        try {
            const FrontState next = step(st, spec, stable_dt(st, spec, b));
            worst = std::min({worst, *std::min_element(next.u.begin(), next.u.end()),
                              *std::min_element(next.v.begin(), next.v.end())});
        } catch (const UndershootError& e) {
            c.passed = false;
            c.detail = std::string("trial ") + std::to_string(k) + ": " + e.what();
            break;
        }
    }
    c.measured = worst;
    if (c.passed) c.passed = worst >= 0.0;
    return c;
}

}  // namespace mixfront
