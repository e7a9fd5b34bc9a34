#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || (depth < 44 && std::abs(diff) <= 15.0 * tol)) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature.
inline double adaptive(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-13) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, long panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double s = 0.5 * (f(a) + f(b));
    for (long i = 1; i < panels; ++i) s += f(a + h * static_cast<double>(i));
    return s * h;
}

/// Largest real part over the full spectrum.
inline double dense_top_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    return es.eigenvalues().real().maxCoeff();
}

/// Ground eigenvalue of -d^2/dx^2 with Dirichlet ends, n interior nodes on (0, length).
inline double dirichlet_laplacian_ground(double length, std::size_t n) {
    const double dx = length / static_cast<double>(n + 1);
    return 2.0 / (dx * dx) * (1.0 - std::cos(std::numbers::pi * dx / length));
}

}  // namespace oracle
