#include "mixfront/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "mixfront/errors.hpp"
#include "mixfront/operators.hpp"
#include "mixfront/solver.hpp"

namespace mixfront {

namespace {

constexpr std::size_t kMaxIterations = 100000;
constexpr std::size_t kInnerIterations = 6;
constexpr double kRootLimit = 1e4;

using Vec = Eigen::VectorXd;

// Entrywise nonnegative matrix P seen through its products and shifted solves.
struct Shifted {
    std::function<void(const Vec&, Vec&)> apply;
    std::function<void(double)> factor;          // prepare solves with theta I - P
    std::function<Vec(const Vec&)> solve;
    double norm;                                 // ||P||_inf
    bool symmetric;
};

struct Perron {
    double root;
    Vec vec;
    std::size_t iterations;
};

void ratio_bounds(const Vec& x, const Vec& px, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double r = px[i] / x[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
}

bool usable(const Vec& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] > 0.0) || !std::isfinite(x[i])) return false;
    return true;
}

// Noda iteration: shifted inverse iteration with the Collatz-Wielandt upper
// bound as shift. The factorization is reused for a few inner sweeps.
Perron noda(const Shifted& p, Vec x) {
    const Eigen::Index n = x.size();
    if (!usable(x)) x = Vec::Ones(n);
    x /= x.maxCoeff();
    Vec px(n);
    p.apply(x, px);
    double lo, hi;
    ratio_bounds(x, px, lo, hi);
    const double tol = 1e-14 * std::max(1.0, p.norm);
    const double accept = 1e-10 * std::max(1.0, p.norm);
    const double margin = 1e-12 * std::max(1.0, p.norm);
    double best = hi - lo;
    std::size_t since_best = 0;
    std::size_t it = 0;
    bool stalled = false;
    while (hi - lo > tol && !stalled) {
        if (it >= kMaxIterations) {
            std::ostringstream os;
            os << "Perron iteration did not converge, ratio gap " << hi - lo;
            throw ConvergenceError(os.str());
        }
        const double theta = hi + margin;
        p.factor(theta);
        for (std::size_t inner = 0; inner < kInnerIterations && hi - lo > tol && !stalled; ++inner) {
            Vec y = p.solve(x);
            for (Eigen::Index i = 0; i < n; ++i) y[i] = std::max(y[i], 0.0);
            const double m = y.maxCoeff();
            if (!(m > 0.0) || !std::isfinite(m)) throw ConvergenceError("Perron iteration broke down");
            y /= m;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!(y[i] > 0.0)) y[i] = std::numeric_limits<double>::min();
            x = y;
            p.apply(x, px);
            ratio_bounds(x, px, lo, hi);
            ++it;
            if (hi - lo < 0.5 * best) {
                best = hi - lo;
                since_best = 0;
            } else if (++since_best > 20 && hi - lo <= accept) {
                stalled = true;  // roundoff level
            }
        }
    }
    double root;
    if (p.symmetric) {
        root = x.dot(px) / x.dot(x);
    } else {
        root = 0.5 * (lo + hi);
    }
    return {root, x, it};
}

Shifted dense_backend(Eigen::MatrixXd pm, bool symmetric) {
    auto mat = std::make_shared<Eigen::MatrixXd>(std::move(pm));
    auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>();
    Shifted s;
    s.norm = mat->cwiseAbs().rowwise().sum().maxCoeff();
    s.symmetric = symmetric;
    s.apply = [mat](const Vec& x, Vec& y) { y.noalias() = *mat * x; };
    s.factor = [mat, lu](double theta) {
        Eigen::MatrixXd m = -*mat;
        m.diagonal().array() += theta;
        lu->compute(m);
    };
    s.solve = [lu](const Vec& x) { return Vec(lu->solve(x)); };
    return s;
}

// Constant-coefficient tridiagonal P with diagonal `d` and off-diagonal `o`.
Shifted tridiagonal_backend(Eigen::Index n, double d, double o) {
    auto theta = std::make_shared<double>(0.0);
    Shifted s;
    s.norm = std::abs(d) + 2.0 * std::abs(o);
    s.symmetric = true;
    s.apply = [n, d, o](const Vec& x, Vec& y) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = d * x[i];
            if (i > 0) v += o * x[i - 1];
            if (i + 1 < n) v += o * x[i + 1];
            y[i] = v;
        }
    };
    s.factor = [theta](double t) { *theta = t; };
    s.solve = [n, d, o, theta](const Vec& x) {
        const auto un = static_cast<std::size_t>(n);
        std::vector<double> lower(un, -o), diag(un, *theta - d), upper(un, -o), rhs(x.data(), x.data() + n);
        const auto sol = solve_tridiagonal(lower, diag, upper, rhs);
        return Vec(Eigen::Map<const Vec>(sol.data(), n));
    };
    return s;
}

void check_length(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("length", "must be positive");
}

void finish(EigenReport& rep, const Perron& pr, double shift, const Shifted& p) {
    rep.lambda1 = -(pr.root - shift);
    rep.iterations = pr.iterations;
    Vec px(pr.vec.size());
    p.apply(pr.vec, px);
    rep.residual = (px - pr.root * pr.vec).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, p.norm + shift);
    if (!(rep.residual <= 1e-8 * scale)) {
        std::ostringstream os;
        os << "eigen residual " << rep.residual << " exceeds tolerance";
        throw ConvergenceError(os.str());
    }
}

EigenReport solve_nonlocal(const Kernel& kernel, double d1, double a_T, double length,
                           std::size_t nodes, const std::vector<double>* warm) {
    check_length(length);
    if (!(d1 > 0.0)) throw ConfigError("d1", "must be positive");
    if (nodes < 3) throw ConfigError("M", "need at least three nodes");
    const double shift = d1 + std::abs(a_T);
    Eigen::MatrixXd pm = nonlocal_operator_matrix(kernel, d1, a_T, length, nodes);
    pm.diagonal().array() += shift;
    const auto backend = dense_backend(std::move(pm), false);
    const auto n = static_cast<Eigen::Index>(nodes);
    Vec x0 = Vec::Ones(n);
    if (warm && warm->size() == nodes) x0 = Eigen::Map<const Vec>(warm->data(), n);
    const auto pr = noda(backend, x0);

    EigenReport rep;
    rep.op = OperatorKind::nonlocal;
    rep.length = length;
    finish(rep, pr, shift, backend);
    const double dx = length / static_cast<double>(nodes - 1);
    rep.x.resize(nodes);
    rep.phi.resize(nodes);
    const double m = pr.vec.maxCoeff();
    for (std::size_t i = 0; i < nodes; ++i) {
        rep.x[i] = static_cast<double>(i) * dx;
        rep.phi[i] = pr.vec[static_cast<Eigen::Index>(i)] / m;
    }
    return rep;
}

EigenReport solve_mixed(const Kernel& kernel, double d2, double tau, double c_T, double length,
                        std::size_t nodes, const std::vector<double>* warm) {
    check_length(length);
    if (!(d2 > 0.0)) throw ConfigError("d2", "must be positive");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau", "must lie in (0, 1]");
    if (nodes < 3) throw ConfigError("M", "need at least three nodes");
    const double dx = length / static_cast<double>(nodes + 1);
    const double shift = 2.0 * d2 * tau / (dx * dx) + d2 * (1.0 - tau) + std::abs(c_T);
    const auto n = static_cast<Eigen::Index>(nodes);
    Shifted backend;
    if (tau == 1.0) {
        backend = tridiagonal_backend(n, -2.0 * d2 / (dx * dx) + c_T + shift, d2 / (dx * dx));
    } else {
        Eigen::MatrixXd pm = mixed_operator_matrix(kernel, d2, tau, c_T, length, nodes);
        pm.diagonal().array() += shift;
        backend = dense_backend(std::move(pm), true);
    }
    Vec x0(n);
    if (warm && warm->size() == nodes + 2) {
        for (Eigen::Index i = 0; i < n; ++i) x0[i] = (*warm)[static_cast<std::size_t>(i) + 1];
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            x0[i] = std::sin(std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n + 1));
    }
    const auto pr = noda(backend, x0);

    EigenReport rep;
    rep.op = OperatorKind::mixed;
    rep.length = length;
    finish(rep, pr, shift, backend);
    rep.x.resize(nodes + 2);
    rep.phi.assign(nodes + 2, 0.0);
    const double m = pr.vec.maxCoeff();
    for (std::size_t i = 0; i < nodes + 2; ++i) rep.x[i] = static_cast<double>(i) * dx;
    rep.x.back() = length;
    for (std::size_t i = 0; i < nodes; ++i) rep.phi[i + 1] = pr.vec[static_cast<Eigen::Index>(i)] / m;
    return rep;
}

using Probe = std::function<EigenReport(double, const std::vector<double>*)>;

double bisect_root(const Probe& probe, double tolerance) {
    if (!(tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
    double lo = 0.05, hi = 1.0;
    EigenReport rlo = probe(lo, nullptr);
    while (!(rlo.lambda1 > 0.0)) {
        lo *= 0.5;
        if (lo < 1e-8) throw ConvergenceError("eigenvalue is not positive on short intervals");
        rlo = probe(lo, &rlo.phi);
    }
    EigenReport rhi = probe(hi, &rlo.phi);
    while (!(rhi.lambda1 < 0.0)) {
        lo = hi;
        rlo = rhi;
        hi *= 2.0;
        if (hi > kRootLimit) throw ConvergenceError("no sign change for lengths up to 1e4");
        rhi = probe(hi, &rhi.phi);
    }
    std::vector<double> warm = rhi.phi;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const EigenReport rm = probe(mid, &warm);
        warm = rm.phi;
        if (hi - lo <= tolerance && std::abs(rm.lambda1) <= tolerance) return mid;
        if (rm.lambda1 > 0.0)
            lo = mid;
        else if (rm.lambda1 < 0.0)
            hi = mid;
        else
            return mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(OperatorKind kind) {
    return kind == OperatorKind::nonlocal ? "nonlocal" : "mixed";
}

Eigen::MatrixXd nonlocal_operator_matrix(const Kernel& kernel, double d1, double a_T,
                                         double length, std::size_t nodes) {
    check_length(length);
    const double dx = length / static_cast<double>(nodes - 1);
    const NonlocalMatrix w(kernel, dx, nodes, Quadrature::trapezoid);
    Eigen::MatrixXd a = d1 * w.dense();
    a.diagonal().array() += a_T - d1;
    return a;
}

Eigen::MatrixXd mixed_operator_matrix(const Kernel& kernel, double d2, double tau, double c_T,
                                      double length, std::size_t nodes) {
    check_length(length);
    const double dx = length / static_cast<double>(nodes + 1);
    const auto n = static_cast<Eigen::Index>(nodes);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    const double nl = d2 * (1.0 - tau);
    if (nl != 0.0) {
        const NonlocalMatrix w(kernel, dx, nodes, Quadrature::interior);
        b = nl * w.dense();
    }
    const double lap = d2 * tau / (dx * dx);
    for (Eigen::Index i = 0; i < n; ++i) {
        b(i, i) += -2.0 * lap - nl + c_T;
        if (i > 0) b(i, i - 1) += lap;
        if (i + 1 < n) b(i, i + 1) += lap;
    }
    return b;
}

EigenReport lambda1_nonlocal(const Kernel& kernel, double d1, const PeriodicCoefficient& a,
                             double length, std::size_t nodes) {
    return solve_nonlocal(kernel, d1, a.time_average(), length, nodes, nullptr);
}

EigenReport lambda1_mixed(const Kernel& kernel, double d2, double tau,
                          const PeriodicCoefficient& c, double length, std::size_t nodes) {
    return solve_mixed(kernel, d2, tau, c.time_average(), length, nodes, nullptr);
}

double gradient_energy(std::span<const double> omega, double length) {
    if (omega.size() < 2) throw ConfigError("omega", "need at least two samples");
    check_length(length);
    const double dx = length / static_cast<double>(omega.size() - 1);
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
        const double d = omega[i + 1] - omega[i];
        e += d * d;
    }
    return e / dx;
}

double rayleigh_quotient(std::span<const double> omega, const Kernel& kernel, double d2,
                         double tau, double c_T, double length) {
    const std::size_t n = omega.size();
    if (n < 3) throw ConfigError("omega", "need at least three samples");
    check_length(length);
    double peak = 0.0;
    for (double w : omega) peak = std::max(peak, std::abs(w));
    if (!(peak > 0.0)) throw ConfigError("omega", "must not vanish identically");
    if (std::abs(omega.front()) > 1e-12 * peak || std::abs(omega.back()) > 1e-12 * peak)
        throw ConfigError("omega", "must vanish at both ends");
    const double dx = length / static_cast<double>(n - 1);
    const auto inner = omega.subspan(1, n - 2);
    double mass = 0.0;
    for (double w : inner) mass += w * w;
    mass *= dx;
    double num = d2 * tau * gradient_energy(omega, length);
    const double nl = d2 * (1.0 - tau);
    if (nl != 0.0) {
        const NonlocalMatrix w(kernel, dx, n - 2, Quadrature::interior);
        const auto conv = w.apply(inner);
        double cross = 0.0;
        for (std::size_t i = 0; i < inner.size(); ++i) cross += inner[i] * conv[i];
        num -= nl * dx * cross;
    }
    return num / mass + nl - c_T;
}

double find_h_star(const Kernel& kernel, double d2, double tau, const PeriodicCoefficient& c,
                   double tolerance, std::size_t nodes) {
    const double c_T = c.time_average();
    return bisect_root(
        [&](double len, const std::vector<double>* warm) {
            return solve_mixed(kernel, d2, tau, c_T, len, nodes, warm);
        },
        tolerance);
}

std::optional<double> find_l_star(const Kernel& kernel, double d1, const PeriodicCoefficient& a,
                                  double tolerance, std::size_t nodes) {
    if (!(tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
    const double a_T = a.time_average();
    if (a_T >= d1) return std::nullopt;
    return bisect_root(
        [&](double len, const std::vector<double>* warm) {
            return solve_nonlocal(kernel, d1, a_T, len, nodes, warm);
        },
        tolerance);
}

Thresholds compute_thresholds(const ProblemSpec& spec, double tolerance, std::size_t nodes) {
    Thresholds th;
    th.a_T = spec.coefficients.a.time_average();
    th.c_T = spec.coefficients.c.time_average();
    th.h_star = find_h_star(spec.kernel, spec.d2, spec.tau, spec.coefficients.c, tolerance, nodes);
    th.l_star = find_l_star(spec.kernel, spec.d1, spec.coefficients.a, tolerance, nodes);
    return th;
}

}  // namespace mixfront
