#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixfront/coefficients.hpp"
#include "mixfront/kernel.hpp"
#include "mixfront/transform.hpp"

namespace mixfront {

/// Initial density as a function of s = x / h0 on [-1, 1].
class InitialProfile {
public:
    enum class Kind { cosine, parabola, table };

    /// amplitude * cos(pi s / 2).
    static InitialProfile cosine(double amplitude);
    /// amplitude * (1 - s^2).
    static InitialProfile parabola(double amplitude);
    /// Piecewise linear through (s_i, y_i); s must cover [-1, 1] with zero
    /// values at both ends.
    static InitialProfile table(std::vector<double> s, std::vector<double> values);

    double operator()(double s) const;
    Kind kind() const { return kind_; }
    double amplitude() const { return amplitude_; }
    const std::vector<double>& nodes() const { return s_; }
    const std::vector<double>& values() const { return y_; }

    double sup() const;
    /// sup |d/ds profile| (sampled).
    double slope() const;

private:
    InitialProfile(Kind kind, double amplitude, std::vector<double> s, std::vector<double> y);

    Kind kind_;
    double amplitude_;
    std::vector<double> s_, y_;
};

/// Reaction terms f1(t, x, u, v), f2(t, x, u, v).
class GrowthModel {
public:
    using Rate = std::function<double(double t, double x, double u, double v)>;

    /// f1 = u (a - u - b v), f2 = v (c - v - d u).
    static GrowthModel lotka_volterra();
    /// User rates with a declared saturation level K and a Lipschitz bound
    /// for f1, f2 on [0, K1] x [0, K2].
    static GrowthModel custom(Rate f1, Rate f2, double saturation, double lipschitz,
                              std::string name = "custom");

    bool is_lotka_volterra() const { return lv_; }
    const std::string& name() const { return name_; }

    double f1(const CoefficientSet& c, double t, double x, double u, double v) const;
    double f2(const CoefficientSet& c, double t, double x, double u, double v) const;

    /// K: f1 < 0 for u > K and f2 < 0 for v > K.
    double saturation(const CoefficientSet& c) const;
    /// Lipschitz bound L of the rates on the box [0, K1] x [0, K2].
    double lipschitz(const CoefficientSet& c, double k1, double k2) const;

    /// Sampled checks of f1(.,.,0,v) = 0, f2(.,.,u,0) = 0 and of the sign
    /// above K on a 20^4 lattice. Throws ConfigError naming the failure.
    void check(const CoefficientSet& c, double h0) const;

private:
    GrowthModel() = default;

    bool lv_ = true;
    Rate f1_, f2_;
    double saturation_ = 0.0;
    double lipschitz_ = 0.0;
    std::string name_ = "lotka_volterra";
};

struct ProblemSpec {
    double d1 = 1.0;
    double d2 = 1.0;
    double tau = 1.0;
    double mu = 1.0;
    double rho1 = 1.0;
    double rho2 = 1.0;
    double h0 = 1.0;
    InitialProfile u0 = InitialProfile::cosine(1.0);
    InitialProfile v0 = InitialProfile::cosine(1.0);
    CoefficientSet coefficients{PeriodicCoefficient::constant(1.0), PeriodicCoefficient::constant(1.0),
                                PeriodicCoefficient::constant(1.0), PeriodicCoefficient::constant(1.0)};
    Kernel kernel = Kernel::tent(1.0);
    GrowthModel growth = GrowthModel::lotka_volterra();

    /// Throws ConfigError naming the first offending field.
    void validate() const;
    /// Same spec with mu, rho1, rho2 multiplied by `factor`.
    ProblemSpec scaled_responses(double factor) const;
};

struct FrontState {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    double gprime = 0.0;
    double hprime = 0.0;
    std::vector<double> u;  // u~ on the reference grid
    std::vector<double> v;  // v~ on the reference grid
};

/// A priori bounds of the solution.
struct Bounds {
    double k = 0.0;  // saturation level
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double lipschitz = 0.0;  // L-hat
    double h0 = 0.0, mu = 0.0, rho1 = 0.0, rho2 = 0.0;

    /// Front-speed envelope R(t).
    double envelope(double t) const;
};

Bounds compute_bounds(const ProblemSpec& spec);

/// Samples u0, v0 onto the grid with g = -h0, h = h0 and sets the speeds.
FrontState initial_state(const ProblemSpec& spec, const ReferenceGrid& grid);

struct FrontSpeeds {
    double gprime;
    double hprime;
};

FrontSpeeds front_speeds(const FrontState& state, const ProblemSpec& spec);

struct StepOptions {
    double safety = 0.5;
    /// Upper cap on dt; 0 means one twentieth of the coefficient period.
    double max_dt = 0.0;
};

/// Largest admissible dt at `state`.
double stable_dt(const FrontState& state, const ProblemSpec& spec, const Bounds& bounds,
                 const StepOptions& options = {});

/// One step of size dt. The returned state carries its own front speeds.
FrontState step(const FrontState& state, const ProblemSpec& spec, double dt);

/// Scalar series recorded at every step.
struct Series {
    std::vector<double> t, g, h, gprime, hprime, max_u, max_v, vx_left, vx_right;
    std::size_t size() const { return t.size(); }
};

struct Trajectory {
    std::vector<FrontState> snapshots;
    Series series;
    Bounds bounds;
    std::size_t steps = 0;
    double final_time = 0.0;
    std::string stop_reason;  // "horizon", "spread" or "vanish"
};

struct RunOptions {
    double horizon = 200.0;
    std::size_t intervals = 256;
    std::size_t record_stride = 50;
    StepOptions step;
    /// Stop once h - g reaches this length.
    std::optional<double> stop_length;
    /// Stop once max u + max v and h' - g' have stayed below these for
    /// `vanish_window` time units.
    std::optional<double> stop_field;
    double stop_speed = 1e-8;
    double vanish_window = 0.0;
};

/// Integrates the free-boundary system. Step errors are rethrown as
/// SolverError carrying the failing time.
Trajectory run(const ProblemSpec& spec, const RunOptions& options);

/// Fixed-domain single-species run u_t = d1 (int J u - u) + u (a(t) - u).
struct FieldTrajectory {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<std::vector<double>> u;
    std::size_t steps = 0;
};

struct FixedDomainOptions {
    std::size_t nodes = 201;
    std::size_t record_stride = 1;
    double safety = 0.5;
};

FieldTrajectory run_fixed_domain_single(const Kernel& kernel, double d1,
                                        const PeriodicCoefficient& a, double length,
                                        const std::function<double(double)>& u0, double horizon,
                                        const FixedDomainOptions& options = {});

}  // namespace mixfront
