#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mixfront/errors.hpp"
#include "mixfront/solver.hpp"

using namespace mixfront;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

FrontState hat_state(std::size_t n) {
    FrontState s;
    s.g = -1.0;
    s.h = 1.0;
    ReferenceGrid grid(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        s.u.push_back(1.0 - std::abs(grid[j]));
        s.v.push_back(0.0);
    }
    return s;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("zero fields give zero speeds") {
    ProblemSpec spec;
    auto s = hat_state(64);
    std::fill(s.u.begin(), s.u.end(), 0.0);
    const auto sp = front_speeds(s, spec);
    CHECK(sp.hprime == 0.0);
    CHECK(sp.gprime == 0.0);
}

TEST_CASE("symmetric state has opposite speeds") {
    ProblemSpec spec;
    const auto s = initial_state(spec, ReferenceGrid(128));
    CHECK(std::abs(s.gprime + s.hprime) <= 1e-10);
    CHECK(s.hprime > 0.0);
}

TEST_CASE("leakage speed against a 2-D midpoint rule") {
    ProblemSpec spec;
    spec.rho1 = 1.0;
    const auto s = hat_state(256);
    const auto sp = front_speeds(s, spec);
    const int n = 1000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -1.0 + 2.0 * (i + 0.5) / n;
        for (int k = 0; k < n; ++k) {
            const double y = 1.0 + (k + 0.5) / n;
            sum += spec.kernel(x - y) * (1.0 - std::abs(x));
        }
    }
    const double ref = sum * (2.0 / n) * (1.0 / n);
    CHECK(sp.hprime == doctest::Approx(ref).epsilon(1e-4));
    CHECK(sp.gprime == doctest::Approx(-ref).epsilon(1e-4));
}

TEST_CASE("logistic decay above the carrying level") {
    ProblemSpec spec;
    auto s = hat_state(64);
    for (std::size_t j = 1; j + 1 < s.u.size(); ++j) s.u[j] = 2.0;
    const auto sp = front_speeds(s, spec);
    s.gprime = sp.gprime;
    s.hprime = sp.hprime;
    const auto b = compute_bounds(spec);
    const auto next = step(s, spec, stable_dt(s, spec, b));
    for (std::size_t j = 1; j + 1 < s.u.size(); ++j) CHECK(next.u[j] < s.u[j]);
    CHECK(next.h > s.h);
    CHECK(next.g < s.g);
}

TEST_CASE("step rule keeps the explicit nonlocal update nonnegative") {
    for (double tau : {1.0, 0.5, 0.1}) {
        ProblemSpec spec;
        spec.tau = tau;
        spec.d2 = 3.0;
        const auto s = initial_state(spec, ReferenceGrid(128));
        const double dt = stable_dt(s, spec, compute_bounds(spec));
        CHECK(dt * (spec.d1 + spec.d2 * (1.0 - tau)) <= 1.0);
    }
}

TEST_CASE("first-order accuracy in time") {
    for (std::size_t n : {64u, 128u}) {
        ProblemSpec spec;
        spec.tau = 0.5;
        auto s = initial_state(spec, ReferenceGrid(n));
        const double dt = stable_dt(s, spec, compute_bounds(spec));
        auto advance = [&](int parts) {
            FrontState cur = s;
            for (int i = 0; i < 16 * parts; ++i) cur = step(cur, spec, dt / parts);
            return cur;
        };
        const auto a = advance(1), b = advance(2), c = advance(4);
        const double ratio_u = sup_diff(a.u, b.u) / sup_diff(b.u, c.u);
        const double ratio_h = (b.h - a.h) / (c.h - b.h);
        CHECK(ratio_u == doctest::Approx(2.0).epsilon(0.2));
        CHECK(ratio_h == doctest::Approx(2.0).epsilon(0.2));
    }
}

TEST_CASE("oversized steps are reported") {
    ProblemSpec spec;
    spec.mu = 50.0;
    const auto s = initial_state(spec, ReferenceGrid(64));
    CHECK_THROWS_AS(step(s, spec, 5.0), UndershootError);
    CHECK_THROWS_AS(step(s, spec, 0.0), ConfigError);
}

TEST_CASE("horizon zero keeps only the initial state") {
    ProblemSpec spec;
    RunOptions o;
    o.horizon = 0.0;
    const auto tr = run(spec, o);
    CHECK(tr.snapshots.size() == 1);
    CHECK(tr.series.size() == 1);
    CHECK(tr.steps == 0);
}

TEST_CASE("symmetric runs stay symmetric") {
    ProblemSpec spec;
    spec.tau = 0.6;
    spec.coefficients.a = PeriodicCoefficient::sinusoidal(1.0, 0.4, 0.3);
    RunOptions o;
    o.horizon = 5.0;
    o.intervals = 128;
    o.record_stride = 5;
    const auto tr = run(spec, o);
    for (std::size_t i = 0; i < tr.series.size(); ++i)
        CHECK(std::abs(tr.series.g[i] + tr.series.h[i]) <= 1e-8);
    for (const auto& st : tr.snapshots)
        for (std::size_t j = 0; j < st.u.size(); ++j) {
            CHECK(std::abs(st.u[j] - st.u[st.u.size() - 1 - j]) <= 1e-8);
            CHECK(std::abs(st.v[j] - st.v[st.v.size() - 1 - j]) <= 1e-8);
        }
}

TEST_CASE("strong growth spreads") {
    ProblemSpec spec;
    spec.coefficients.a = PeriodicCoefficient::constant(1.5);
    RunOptions o;
    o.horizon = 50.0;
    o.intervals = 128;
    o.record_stride = 1000;
    o.stop_length = 3.5 * 2.0 * spec.h0;
    const auto tr = run(spec, o);
    CHECK(tr.series.h.back() - tr.series.g.back() > 3.0 * 2.0 * spec.h0);
}

TEST_CASE("a priori bounds are ordered and the envelope grows") {
    ProblemSpec spec;
    spec.u0 = InitialProfile::cosine(3.0);
    const auto b = compute_bounds(spec);
    CHECK(b.k1 == 3.0);
    CHECK(b.k2 == 1.0);
    CHECK(b.k3 > 0.0);
    double prev = 0.0;
    for (double t = 0.0; t < 10.0; t += 0.5) {
        CHECK(b.envelope(t) >= prev);
        prev = b.envelope(t);
    }
}

TEST_CASE("spec validation names the field") {
    ProblemSpec spec;
    spec.tau = 0.0;
    try {
        spec.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "tau");
    }
    CHECK_THROWS_AS(InitialProfile::table({-1.0, 0.0, 1.0}, {0.1, 1.0, 0.0}), ConfigError);
    ProblemSpec bad;
    bad.kernel = Kernel::sampled({-1.0, -0.5, 0.0, 0.5, 1.0}, {0.0, 1.0, 0.0, 1.0, 0.0});
    try {
        bad.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "kernel");
    }
    CHECK_THROWS_AS(ProblemSpec{}.scaled_responses(0.0), ConfigError);
}

TEST_CASE("custom growth sanity checks") {
    ProblemSpec spec;
    const auto ok = GrowthModel::custom([](double, double, double u, double v) { return u * (1 - u - v); },
                                        [](double, double, double u, double v) { return v * (1 - v - u); },
                                        1.0, 4.0);
    CHECK_NOTHROW(ok.check(spec.coefficients, spec.h0));
    const auto bad = GrowthModel::custom([](double, double, double u, double) { return 1.0 - u; },
                                         [](double, double, double, double v) { return -v; }, 1.0, 1.0);
    CHECK_THROWS_AS(bad.check(spec.coefficients, spec.h0), ConfigError);
}

TEST_CASE("fixed-domain runs") {
    const auto k = Kernel::tent(1.0);
    const auto a = PeriodicCoefficient::sinusoidal(0.5, 0.3, 0.0);
    auto bump = [](double x) { return 0.5 + 0.0 * x; };
    CHECK_THROWS_AS(run_fixed_domain_single(k, 0.0, a, 1.0, bump, 1.0), ConfigError);

    FixedDomainOptions o;
    o.nodes = 41;
    o.record_stride = 1000000;
    const auto small = run_fixed_domain_single(k, 1.0, a, 0.01, bump, 40.0, o);
    CHECK(*std::max_element(small.u.back().begin(), small.u.back().end()) < 1e-6);

    o.nodes = 101;
    o.record_stride = 1;
    const auto big = run_fixed_domain_single(k, 1.0, a, 30.0, bump, 60.0, o);
    const auto& last = big.u.back();
    CHECK(*std::min_element(last.begin(), last.end()) > 0.0);
    const double t_end = big.t.back();
    std::size_t back = big.t.size() - 1;
    while (back > 0 && big.t[back] > t_end - 1.0 + 1e-9) --back;
    CHECK(std::abs(big.t[back] - (t_end - 1.0)) < 1e-9);
    CHECK(sup_diff(big.u[back], last) < 1e-3);
}

}
