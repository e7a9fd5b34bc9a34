#include "mixfront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mixfront/errors.hpp"
#include "mixfront/operators.hpp"

namespace mixfront {

namespace {

constexpr double kUndershoot = 1e-13;
constexpr int kLattice = 20;

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

double z_node(std::size_t j, std::size_t n) {
    return -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1);
}

void clamp_field(std::vector<double>& f, const char* name) {
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!std::isfinite(f[j])) {
            std::ostringstream os;
            os << name << " is not finite at node " << j;
            throw UndershootError(os.str());
        }
        if (f[j] < 0.0) {
            if (f[j] < -kUndershoot) {
                std::ostringstream os;
                os << name << " = " << f[j] << " at node " << j;
                throw UndershootError(os.str());
            }
            f[j] = 0.0;
        }
    }
}

double max_of(const std::vector<double>& f) { return *std::max_element(f.begin(), f.end()); }

}  // namespace

// ---------------------------------------------------------------- profiles

InitialProfile::InitialProfile(Kind kind, double amplitude, std::vector<double> s,
                               std::vector<double> y)
    : kind_(kind), amplitude_(amplitude), s_(std::move(s)), y_(std::move(y)) {}

InitialProfile InitialProfile::cosine(double amplitude) {
    if (!(amplitude > 0.0)) throw ConfigError("amplitude", "must be positive");
    return InitialProfile(Kind::cosine, amplitude, {}, {});
}

InitialProfile InitialProfile::parabola(double amplitude) {
    if (!(amplitude > 0.0)) throw ConfigError("amplitude", "must be positive");
    return InitialProfile(Kind::parabola, amplitude, {}, {});
}

InitialProfile InitialProfile::table(std::vector<double> s, std::vector<double> values) {
    if (s.size() < 3 || s.size() != values.size())
        throw ConfigError("profile", "need at least three (s, value) pairs");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw ConfigError("profile", "s must be strictly increasing");
    if (s.front() != -1.0 || s.back() != 1.0)
        throw ConfigError("profile", "s must span [-1, 1]");
    if (values.front() != 0.0 || values.back() != 0.0)
        throw ConfigError("profile", "must vanish at s = +-1");
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        if (!(values[i] > 0.0)) throw ConfigError("profile", "must be positive inside");
    const double amp = *std::max_element(values.begin(), values.end());
    return InitialProfile(Kind::table, amp, std::move(s), std::move(values));
}

double InitialProfile::operator()(double s) const {
    if (s <= -1.0 || s >= 1.0) return 0.0;
    switch (kind_) {
        case Kind::cosine:
            return amplitude_ * std::cos(0.5 * std::numbers::pi * s);
        case Kind::parabola:
            return amplitude_ * (1.0 - s * s);
        case Kind::table:
            return interp(s_, y_, s);
    }
    return 0.0;
}

double InitialProfile::sup() const { return amplitude_; }

double InitialProfile::slope() const {
    switch (kind_) {
        case Kind::cosine:
            return 0.5 * std::numbers::pi * amplitude_;
        case Kind::parabola:
            return 2.0 * amplitude_;
        case Kind::table: {
            double m = 0.0;
            for (std::size_t i = 1; i < s_.size(); ++i)
                m = std::max(m, std::abs(y_[i] - y_[i - 1]) / (s_[i] - s_[i - 1]));
            return m;
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------- growth

GrowthModel GrowthModel::lotka_volterra() { return GrowthModel(); }

GrowthModel GrowthModel::custom(Rate f1, Rate f2, double saturation, double lipschitz,
                                std::string name) {
    if (!f1 || !f2) throw ConfigError("growth", "both rates are required");
    if (!(saturation > 0.0)) throw ConfigError("growth.K", "must be positive");
    if (!(lipschitz > 0.0)) throw ConfigError("growth.lipschitz", "must be positive");
    GrowthModel m;
    m.lv_ = false;
    m.f1_ = std::move(f1);
    m.f2_ = std::move(f2);
    m.saturation_ = saturation;
    m.lipschitz_ = lipschitz;
    m.name_ = std::move(name);
    return m;
}

double GrowthModel::f1(const CoefficientSet& c, double t, double x, double u, double v) const {
    if (lv_) return u * (c.a(t) - u - c.b(t) * v);
    return f1_(t, x, u, v);
}

double GrowthModel::f2(const CoefficientSet& c, double t, double x, double u, double v) const {
    if (lv_) return v * (c.c(t) - v - c.d(t) * u);
    return f2_(t, x, u, v);
}

double GrowthModel::saturation(const CoefficientSet& c) const {
    if (lv_) return std::max(c.a.max_value(), c.c.max_value());
    return saturation_;
}

double GrowthModel::lipschitz(const CoefficientSet& c, double k1, double k2) const {
    if (!lv_) return lipschitz_;
    const double a = c.a.max_value(), b = c.b.max_value();
    const double cc = c.c.max_value(), d = c.d.max_value();
    return std::max({a + 2.0 * k1 + b * k2, b * k1, cc + 2.0 * k2 + d * k1, d * k2});
}

void GrowthModel::check(const CoefficientSet& c, double h0) const {
    const double k = saturation(c);
    const double period = c.period();
    for (int it = 0; it < kLattice; ++it) {
        const double t = period * it / kLattice;
        for (int ix = 0; ix < kLattice; ++ix) {
            const double x = -h0 + 2.0 * h0 * ix / (kLattice - 1);
            for (int i = 0; i < kLattice; ++i) {
                const double w = 2.0 * k * i / (kLattice - 1);
                if (f1(c, t, x, 0.0, w) != 0.0)
                    throw ConfigError("growth.f1", "f1(t, x, 0, v) must vanish");
                if (f2(c, t, x, w, 0.0) != 0.0)
                    throw ConfigError("growth.f2", "f2(t, x, u, 0) must vanish");
                const double above = k * (1.0 + 1.0 / kLattice + static_cast<double>(i) / kLattice);
                for (int j = 0; j < kLattice; ++j) {
                    const double other = 2.0 * k * j / (kLattice - 1);
                    if (!(f1(c, t, x, above, other) < 0.0))
                        throw ConfigError("growth.f1", "f1 must be negative for u > K");
                    if (!(f2(c, t, x, other, above) < 0.0))
                        throw ConfigError("growth.f2", "f2 must be negative for v > K");
                }
            }
        }
    }
}

// ---------------------------------------------------------------- spec

void ProblemSpec::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name, "must be positive");
    };
    positive(d1, "d1");
    positive(d2, "d2");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau", "must lie in (0, 1]");
    positive(mu, "mu");
    positive(rho1, "rho1");
    positive(rho2, "rho2");
    positive(h0, "h0");
    for (int i = 1; i < 400; ++i) {
        const double s = -1.0 + 2.0 * i / 400.0;
        if (!(u0(s) > 0.0)) throw ConfigError("u0", "must be positive inside (-h0, h0)");
        if (!(v0(s) > 0.0)) throw ConfigError("v0", "must be positive inside (-h0, h0)");
    }
    const auto report = kernel.validate();
    if (!report.ok()) throw ConfigError("kernel", "fails check '" + report.first_failure() + "'");
    growth.check(coefficients, h0);
}

ProblemSpec ProblemSpec::scaled_responses(double factor) const {
    if (!(factor > 0.0)) throw ConfigError("scale", "must be positive");
    ProblemSpec s = *this;
    s.mu *= factor;
    s.rho1 *= factor;
    s.rho2 *= factor;
    return s;
}

// ---------------------------------------------------------------- bounds

double Bounds::envelope(double t) const {
    return mu * k3 + 2.0 * (h0 * rho1 * k1 + h0 * rho2 * k2 + mu * k3) *
                         std::exp((rho1 * k1 + rho2 * k2) * t);
}

Bounds compute_bounds(const ProblemSpec& spec) {
    Bounds b;
    b.k = spec.growth.saturation(spec.coefficients);
    b.k1 = std::max(spec.u0.sup(), b.k);
    b.k2 = std::max(spec.v0.sup(), b.k);
    b.lipschitz = spec.growth.lipschitz(spec.coefficients, b.k1, b.k2);
    const double c1 = spec.v0.sup() + spec.v0.slope() / spec.h0;
    b.k3 = 2.0 * b.k2 *
           std::max(std::sqrt((b.lipschitz + spec.d2 * (1.0 - spec.tau)) / (2.0 * spec.d2 * spec.tau)),
                    4.0 * c1 / (3.0 * b.k2));
    b.h0 = spec.h0;
    b.mu = spec.mu;
    b.rho1 = spec.rho1;
    b.rho2 = spec.rho2;
    return b;
}

// ---------------------------------------------------------------- stepping

FrontState initial_state(const ProblemSpec& spec, const ReferenceGrid& grid) {
    FrontState s;
    s.g = -spec.h0;
    s.h = spec.h0;
    s.u.resize(grid.size());
    s.v.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        s.u[j] = spec.u0(grid[j]);
        s.v[j] = spec.v0(grid[j]);
    }
    s.u.front() = s.u.back() = 0.0;
    s.v.front() = s.v.back() = 0.0;
    const auto sp = front_speeds(s, spec);
    s.gprime = sp.gprime;
    s.hprime = sp.hprime;
    return s;
}

FrontSpeeds front_speeds(const FrontState& state, const ProblemSpec& spec) {
    const std::size_t n = state.u.size();
    const double dz = 2.0 / static_cast<double>(n - 1);
    const double half_len = 0.5 * (state.h - state.g);
    double right = 0.0, left = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0 || j + 1 == n) ? 0.5 * dz : dz;
        const double mass = spec.rho1 * state.u[j] + spec.rho2 * state.v[j];
        if (mass == 0.0) continue;
        const double x = physical_x(state.g, state.h, z_node(j, n));
        right += w * spec.kernel.tail_mass(state.h - x) * mass;
        left += w * spec.kernel.tail_mass(x - state.g) * mass;
    }
    FrontSpeeds out;
    out.hprime = -spec.mu * boundary_gradient(state.v, state.g, state.h, Side::right) +
                 half_len * right;
    out.gprime = -spec.mu * boundary_gradient(state.v, state.g, state.h, Side::left) -
                 half_len * left;
    return out;
}

double stable_dt(const FrontState& state, const ProblemSpec& spec, const Bounds& bounds,
                 const StepOptions& options) {
    const double dz = 2.0 / static_cast<double>(state.u.size() - 1);
    const double len = state.h - state.g;
    const double eta_max = 2.0 * std::max(std::abs(state.gprime), std::abs(state.hprime)) / len;
    const double rate = eta_max / dz + spec.d1 + spec.d2 * (1.0 - spec.tau) + bounds.lipschitz;
    const double cap = options.max_dt > 0.0 ? options.max_dt : spec.coefficients.period() / 20.0;
    return std::min(options.safety / rate, cap);
}

FrontState step(const FrontState& state, const ProblemSpec& spec, double dt) {
    if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
    const std::size_t n = state.u.size();
    const double dz = 2.0 / static_cast<double>(n - 1);
    const double g = state.g, h = state.h, len = h - g;
    const auto sp = front_speeds(state, spec);

    const NonlocalMatrix w(spec.kernel, 0.5 * len * dz, n, Quadrature::trapezoid);
    std::vector<double> eta_z(n), adv_u(n), adv_v(n), wu(n), wv(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) eta_z[j] = eta(g, h, sp.gprime, sp.hprime, z_node(j, n));
    upwind_advection(state.u, eta_z, dz, adv_u);
    upwind_advection(state.v, eta_z, dz, adv_v);
    w.apply(state.u, wu);
    const double nl = spec.d2 * (1.0 - spec.tau);
    if (nl != 0.0) w.apply(state.v, wv);

    FrontState next;
    next.t = state.t + dt;
    next.u.assign(n, 0.0);
    next.v.assign(n, 0.0);
    std::vector<double> rhs(n - 2), lower(n - 2), diag(n - 2), upper(n - 2);
    const double r = dt * spec.d2 * spec.tau * xi(g, h) / (dz * dz);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double x = physical_x(g, h, z_node(j, n));
        const double u = state.u[j], v = state.v[j];
        next.u[j] = u + dt * (adv_u[j] + spec.d1 * (wu[j] - u) +
                              spec.growth.f1(spec.coefficients, state.t, x, u, v));
        double expl = adv_v[j] + spec.growth.f2(spec.coefficients, state.t, x, u, v);
        if (nl != 0.0) expl += nl * (wv[j] - v);
        rhs[j - 1] = v + dt * expl;
        lower[j - 1] = -r;
        upper[j - 1] = -r;
        diag[j - 1] = 1.0 + 2.0 * r;
    }
    const auto vin = solve_tridiagonal(lower, diag, upper, rhs);
    std::copy(vin.begin(), vin.end(), next.v.begin() + 1);
    clamp_field(next.u, "u");
    clamp_field(next.v, "v");

    next.g = g + dt * sp.gprime;
    next.h = h + dt * sp.hprime;
    if (!(next.h - next.g > 0.0)) throw FrontCollapseError("fronts crossed");
    const auto sn = front_speeds(next, spec);
    next.gprime = sn.gprime;
    next.hprime = sn.hprime;
    return next;
}

// ---------------------------------------------------------------- runs

namespace {

void record(Series& s, const FrontState& st) {
    s.t.push_back(st.t);
    s.g.push_back(st.g);
    s.h.push_back(st.h);
    s.gprime.push_back(st.gprime);
    s.hprime.push_back(st.hprime);
    s.max_u.push_back(max_of(st.u));
    s.max_v.push_back(max_of(st.v));
    s.vx_left.push_back(boundary_gradient(st.v, st.g, st.h, Side::left));
    s.vx_right.push_back(boundary_gradient(st.v, st.g, st.h, Side::right));
}

}  // namespace

Trajectory run(const ProblemSpec& spec, const RunOptions& options) {
    if (!(options.horizon >= 0.0)) throw ConfigError("horizon", "must be nonnegative");
    if (options.record_stride == 0) throw ConfigError("record_stride", "must be positive");
    spec.validate();
    const ReferenceGrid grid(options.intervals);
    Trajectory traj;
    traj.bounds = compute_bounds(spec);
    FrontState state = initial_state(spec, grid);
    record(traj.series, state);
    traj.snapshots.push_back(state);
    traj.stop_reason = "horizon";

    const double end = options.horizon;
    const double slack = 1e-12 * std::max(1.0, end);
    double quiet_since = -1.0;
    bool last_saved = true;
    while (state.t < end - slack) {
        double dt = stable_dt(state, spec, traj.bounds, options.step);
        if (state.t + dt > end - slack) dt = end - state.t;
        try {
            state = step(state, spec, dt);
        } catch (const std::exception& e) {
            throw SolverError(state.t, e.what());
        }
        ++traj.steps;
        record(traj.series, state);
        last_saved = traj.steps % options.record_stride == 0;
        if (last_saved) traj.snapshots.push_back(state);

        if (options.stop_length && state.h - state.g >= *options.stop_length) {
            traj.stop_reason = "spread";
            break;
        }
        if (options.stop_field) {
            const bool quiet = traj.series.max_u.back() + traj.series.max_v.back() <
                                   *options.stop_field &&
                               state.hprime - state.gprime < options.stop_speed;
            if (!quiet) {
                quiet_since = -1.0;
            } else {
                if (quiet_since < 0.0) quiet_since = state.t;
                if (state.t - quiet_since >= options.vanish_window) {
                    traj.stop_reason = "vanish";
                    break;
                }
            }
        }
    }
    if (!last_saved) traj.snapshots.push_back(state);
    traj.final_time = state.t;
    return traj;
}

FieldTrajectory run_fixed_domain_single(const Kernel& kernel, double d1,
                                        const PeriodicCoefficient& a, double length,
                                        const std::function<double(double)>& u0, double horizon,
                                        const FixedDomainOptions& options) {
    if (!(d1 > 0.0)) throw ConfigError("d1", "must be positive");
    if (!(length > 0.0)) throw ConfigError("length", "must be positive");
    if (!(horizon >= 0.0)) throw ConfigError("horizon", "must be nonnegative");
    if (options.nodes < 3) throw ConfigError("nodes", "need at least three nodes");
    if (options.record_stride == 0) throw ConfigError("record_stride", "must be positive");
    const std::size_t m = options.nodes;
    const double dx = length / static_cast<double>(m - 1);
    const NonlocalMatrix w(kernel, dx, m, Quadrature::trapezoid);

    FieldTrajectory out;
    out.x.resize(m);
    std::vector<double> u(m), wu(m);
    double k1 = a.max_value();
    for (std::size_t i = 0; i < m; ++i) {
        out.x[i] = static_cast<double>(i) * dx;
        u[i] = u0(out.x[i]);
        if (!(u[i] >= 0.0)) throw ConfigError("u0", "must be nonnegative");
        k1 = std::max(k1, u[i]);
    }
    // dt divides the period so records land on whole periods.
    const double period = a.period();
    const double dt_rule = std::min(options.safety / (d1 + a.max_value() + 2.0 * k1), period / 20.0);
    const double per_period = std::ceil(period / dt_rule);
    const double dt = period / per_period;
    const auto total = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));

    out.t.push_back(0.0);
    out.u.push_back(u);
    for (std::size_t s = 1; s <= total; ++s) {
        const double t = static_cast<double>(s - 1) * dt;
        const double h = std::min(dt, horizon - t);
        w.apply(u, wu);
        const double at = a(t);
        for (std::size_t i = 0; i < m; ++i) u[i] += h * (d1 * (wu[i] - u[i]) + u[i] * (at - u[i]));
        try {
            clamp_field(u, "u");
        } catch (const std::exception& e) {
            throw SolverError(t, e.what());
        }
        ++out.steps;
        if (s % options.record_stride == 0 || s == total) {
            out.t.push_back(std::min(horizon, static_cast<double>(s) * dt));
            out.u.push_back(u);
        }
    }
    return out;
}

}  // namespace mixfront
