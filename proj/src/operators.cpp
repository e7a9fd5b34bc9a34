#include "mixfront/operators.hpp"

#include <algorithm>
#include <cmath>

#include "mixfront/errors.hpp"

namespace mixfront {

namespace {

constexpr double kGauss[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                              0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                               0.3478548451374538};

// integral_a^b J(s - y) w(y) dy with w linear, split where J has kinks.
template <class Weight>
double hat_piece(const Kernel& kernel, const std::vector<double>& kinks, double s, double a,
                 double b, Weight w) {
    if (s - b >= kernel.support() || s - a <= -kernel.support()) return 0.0;
    std::vector<double> cuts{a, b};
    for (double k : kinks) {
        const double y = s - k;
        if (y > a && y < b) cuts.push_back(y);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
        const double half = 0.5 * (cuts[p + 1] - cuts[p]);
        for (int q = 0; q < 4; ++q) {
            const double y = mid + half * kGauss[q];
            total += half * kGaussW[q] * kernel.evaluate(s - y) * w(y);
        }
    }
    return total;
}

}  // namespace

NonlocalMatrix::NonlocalMatrix(const Kernel& kernel, double spacing, std::size_t nodes,
                               Quadrature quadrature)
    : n_(nodes), dx_(spacing), closed_(quadrature == Quadrature::trapezoid) {
    if (!(spacing > 0.0)) throw ConfigError("length", "must be positive");
    if (nodes < 2) throw ConfigError("nodes", "need at least two nodes");
    const auto kinks = kernel.breakpoints();
    const double dx = dx_;
    auto right = [dx](double y) { return 1.0 - y / dx; };
    auto left = [dx](double y) { return 1.0 + y / dx; };
    full_.resize(n_);
    half_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const double s = static_cast<double>(k) * dx_;
        half_[k] = hat_piece(kernel, kinks, s, 0.0, dx_, right);
        full_[k] = half_[k] + hat_piece(kernel, kinks, s, -dx_, 0.0, left);
        if (full_[k] != 0.0) band_ = k;
    }
}

double NonlocalMatrix::entry(std::size_t i, std::size_t j) const {
    if (closed_) {
        if (j == 0) return half_[i];
        if (j == n_ - 1) return half_[n_ - 1 - i];
    }
    return full_[i > j ? i - j : j - i];
}

double NonlocalMatrix::row_sum(std::size_t i) const {
    double s = 0.0;
    const std::size_t lo = i > band_ ? i - band_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + band_);
    for (std::size_t j = lo; j <= hi; ++j) s += entry(i, j);
    return s;
}

void NonlocalMatrix::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != n_ || out.size() != n_) throw ConfigError("field", "size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i > band_ ? i - band_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + band_);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += entry(i, j) * in[j];
        out[i] = s;
    }
}

std::vector<double> NonlocalMatrix::apply(std::span<const double> in) const {
    std::vector<double> out(n_);
    apply(in, out);
    return out;
}

Eigen::MatrixXd NonlocalMatrix::dense() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j);
    return m;
}

NonlocalMatrix assemble_nonlocal(const Kernel& kernel, double length, const ReferenceGrid& grid) {
    if (!(length > 0.0)) throw ConfigError("length", "must be positive");
    // (l/2) * dz is the physical node spacing.
    return NonlocalMatrix(kernel, 0.5 * length * grid.spacing(), grid.size(),
                          Quadrature::trapezoid);
}

void LocalLaplacian::apply(std::span<const double> in, std::span<double> out) const {
    const double inv = 1.0 / (dz_ * dz_);
    out[0] = 0.0;
    out[n_ - 1] = 0.0;
    for (std::size_t j = 1; j + 1 < n_; ++j) out[j] = (in[j + 1] - 2.0 * in[j] + in[j - 1]) * inv;
}

std::vector<double> apply_mixed(std::span<const double> field, double d2, double tau,
                                const NonlocalMatrix& nonlocal, const LocalLaplacian& laplacian,
                                double xi) {
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau", "must lie in (0, 1]");
    const std::size_t n = field.size();
    std::vector<double> lap(n), conv(n, 0.0), out(n, 0.0);
    laplacian.apply(field, lap);
    const double nl = d2 * (1.0 - tau);
    if (nl != 0.0) nonlocal.apply(field, conv);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        out[j] = d2 * tau * xi * lap[j];
        if (nl != 0.0) out[j] += nl * (conv[j] - field[j]);
    }
    return out;
}

double boundary_gradient(std::span<const double> field, double g, double h, Side side) {
    const std::size_t n = field.size();
    if (n < 3) throw ConfigError("field", "need at least three nodes");
    const double dz = 2.0 / static_cast<double>(n - 1);
    const double scale = 2.0 / (h - g);
    double dfdz = 0.0;
    if (side == Side::right)
        dfdz = (3.0 * field[n - 1] - 4.0 * field[n - 2] + field[n - 3]) / (2.0 * dz);
    else
        dfdz = (-3.0 * field[0] + 4.0 * field[1] - field[2]) / (2.0 * dz);
    return dfdz * scale;
}

void upwind_advection(std::span<const double> field, std::span<const double> eta, double dz,
                      std::span<double> out) {
    const std::size_t n = field.size();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (eta[j] > 0.0)
            out[j] = eta[j] * (field[j + 1] - field[j]) / dz;
        else
            out[j] = eta[j] * (field[j] - field[j - 1]) / dz;
    }
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n), d(n), x(n);
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * c[i - 1];
        c[i] = i + 1 < n ? upper[i] / m : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

}  // namespace mixfront
